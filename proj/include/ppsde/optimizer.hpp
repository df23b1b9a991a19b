#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ppsde/de_engine.hpp"
#include "ppsde/pps_controller.hpp"
#include "ppsde/problem.hpp"

namespace ppsde {

enum class Algorithm { pps_de, sf_de, eps_de };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::pps_de, Algorithm::sf_de, Algorithm::eps_de};

std::string_view to_string(Algorithm algorithm) noexcept;
Algorithm parse_algorithm(std::string_view text);

/// Acceptance rule in force during one generation.
enum class SelectionRule { push, pull, sf };

std::string_view to_string(SelectionRule rule) noexcept;

/// Test instrumentation. Never set by the CLI.
struct RunHooks {
    /// Credits this strategy (and uses its trial) for every top target.
    std::optional<StrategyId> forced_top_winner;
};

struct RunConfig {
    Algorithm algorithm = Algorithm::pps_de;
    std::size_t population_size = 50;
    std::size_t top_size = 25;
    std::size_t learning_period = 25;
    double p_fraction = 0.05;
    std::uint64_t max_fes = 200000;
    std::size_t memory_size = 5;

    double switch_threshold = 1e-3;
    double switch_delta = 1e-6;

    double eps_tau = 0.1;
    double eps_alpha = 0.95;
    double eps_cp = 2.0;
    double eps_cutoff_fraction = 0.9;  // Tc = fraction * MaxFES / (2 * N_P)
    double eps_theta = 0.95;
    std::optional<double> eps_cutoff;   // absolute Tc, overrides the fraction
    std::optional<double> eps_initial;  // fixed eps_0 instead of the percentile rule

    std::uint64_t seed = 1;
    RunHooks hooks;

    /// N_P = 5D, T = N_P / 2, MaxFES = 20000D.
    static RunConfig defaults_for(std::size_t dim);

    /// Throws std::invalid_argument on a violated invariant.
    void validate() const;

    std::uint64_t generation_cost() const noexcept { return 3 * top_size + (population_size - top_size); }
    double epsilon_cutoff() const noexcept;
};

struct GenerationRecord {
    std::size_t generation = 0;
    std::uint64_t fes = 0;
    double best_f = 0.0;    // historical SF-best
    double best_phi = 0.0;
    SelectionRule rule = SelectionRule::push;
    double eps = 0.0;
    std::array<double, kNumStrategies> sr{};
    std::array<std::size_t, kNumStrategies> top_wins{};
    std::array<std::size_t, kNumStrategies> bottom_picks{};
    double population_min_f = 0.0;
    std::size_t feasible_count = 0;
};

struct RunResult {
    Individual best;
    std::vector<GenerationRecord> trace;  // row 0 is the initial population
    std::uint64_t final_fes = 0;
    std::optional<std::size_t> switch_generation;
    double wall_seconds = 0.0;
    Population final_population;
};

/// SF-best of the population, kept only if it beats `retained`.
Individual best_so_far(std::span<const Individual> population, const Individual* retained = nullptr);

RunResult run_ppsde(const Problem& problem, RunConfig config);

/// SF-only or static-epsilon ablation; config.algorithm must name one.
RunResult run_baseline(const Problem& problem, const RunConfig& config);

/// Dispatches on config.algorithm.
RunResult run(const Problem& problem, const RunConfig& config);

}  // namespace ppsde
