#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "ppsde/problem.hpp"

namespace ppsde {

using Rng = std::mt19937_64;

enum class StrategyId : std::size_t { rand_1_bin = 0, current_to_pbest_1 = 1, current_to_rand_1 = 2 };

inline constexpr std::size_t kNumStrategies = 3;
inline constexpr std::array<StrategyId, kNumStrategies> kAllStrategies{
    StrategyId::rand_1_bin, StrategyId::current_to_pbest_1, StrategyId::current_to_rand_1};

std::string_view to_string(StrategyId id) noexcept;
constexpr std::size_t index_of(StrategyId id) noexcept { return static_cast<std::size_t>(id); }

// ---------------------------------------------------------------------------
// Success-history parameter adaptation

inline constexpr double kInitialMemoryValue = 0.5;
inline constexpr double kParameterSpread = 0.1;

/// Historical memories of one strategy plus the successes of the current
/// generation.
struct StrategyMemory {
    std::vector<double> m_f;
    std::vector<double> m_cr;
    std::size_t write_pos = 0;  // 0-based; wraps at m_f.size()
    std::vector<double> s_f;
    std::vector<double> s_cr;
    std::vector<double> delta;
};

class ParameterMemory {
public:
    explicit ParameterMemory(std::size_t history_size = 5);

    std::size_t history_size() const noexcept { return history_size_; }
    const StrategyMemory& operator[](StrategyId id) const noexcept { return per_strategy_[index_of(id)]; }
    StrategyMemory& operator[](StrategyId id) noexcept { return per_strategy_[index_of(id)]; }

private:
    std::size_t history_size_;
    std::array<StrategyMemory, kNumStrategies> per_strategy_;
};

struct ControlParameters {
    double F = 0.5;
    double CR = 0.5;
};

/// Maps a raw Cauchy draw to a scale factor: nullopt means "draw again"
/// (raw <= 0), values above one are clamped to one.
std::optional<double> clamp_scale_factor(double raw) noexcept;

/// Truncates a raw Gaussian draw into [0, 1].
double truncate_crossover_rate(double raw) noexcept;

ControlParameters sample_parameters(const ParameterMemory& memory, StrategyId strategy, Rng& rng);

/// Stores a successful (F, CR) with its improvement magnitude.
void record_success(ParameterMemory& memory, StrategyId strategy, double F, double CR, double delta);

/// w_t = delta_t / sum(delta); uniform when the deltas sum to zero.
std::vector<double> improvement_weights(std::span<const double> delta);

/// Both means are clamped into [min, max] of `values` to absorb rounding.
double weighted_lehmer_mean(std::span<const double> values, std::span<const double> weights);
double weighted_arithmetic_mean(std::span<const double> values, std::span<const double> weights);

/// End-of-generation memory update for one strategy; clears its success sets.
void update_memory(ParameterMemory& memory, StrategyId strategy);

// ---------------------------------------------------------------------------
// Strategy adaptation

/// Sliding window of per-generation win counts.
class StrategyStats {
public:
    explicit StrategyStats(std::size_t window = 25);

    std::size_t window() const noexcept { return window_; }

    /// Pushes one generation of wins, dropping the oldest beyond the window.
    void record_generation(const std::array<std::size_t, kNumStrategies>& wins);

    std::array<std::size_t, kNumStrategies> windowed_wins() const noexcept;

    /// Uniform while generation < window or when no wins were recorded.
    std::array<double, kNumStrategies> success_rates(std::size_t generation) const noexcept;

private:
    std::size_t window_;
    std::deque<std::array<std::size_t, kNumStrategies>> history_;
};

StrategyId select_strategy(const StrategyStats& stats, std::size_t generation, Rng& rng);

// ---------------------------------------------------------------------------
// Trial vector generation

/// Size of the pbest pool: max(1, round_half_up(p_fraction * n)).
std::size_t pbest_pool_size(std::size_t population_size, double p_fraction) noexcept;

/// Midpoint repair toward the parent for every coordinate outside the bounds.
Vector repair_bounds(std::span<const double> candidate, std::span<const double> parent,
                     const Problem& problem);

/// Binomial crossover with one guaranteed donor coordinate at `forced_index`.
Vector binomial_crossover(std::span<const double> target, std::span<const double> donor, double CR,
                          std::size_t forced_index, Rng& rng);

/// Draws `count` distinct indices from [0, n), none equal to anything in `exclude`.
std::vector<std::size_t> distinct_indices(std::size_t n, std::size_t count,
                                          std::span<const std::size_t> exclude, Rng& rng);

Vector generate_rand_1_bin(std::span<const Individual> pop, std::size_t target, double F,
                           double CR, const Problem& problem, Rng& rng);

/// `sf_order` is the population sorted best first; the pbest individual is
/// drawn uniformly from its first pbest_pool_size(...) entries.
Vector generate_current_to_pbest(std::span<const Individual> pop, std::size_t target, double F,
                                 double CR, double p_fraction, std::span<const std::size_t> sf_order,
                                 const Problem& problem, Rng& rng);

Vector generate_current_to_rand(std::span<const Individual> pop, std::size_t target, double F,
                                const Problem& problem, Rng& rng);

// Donor formulas with every random choice made explicit.
Vector rand_1_donor(std::span<const double> base, std::span<const double> plus,
                    std::span<const double> minus, double F);
Vector current_to_pbest_donor(std::span<const double> current, std::span<const double> pbest,
                              std::span<const double> plus, std::span<const double> minus, double F);
Vector current_to_rand_donor(std::span<const double> current, std::span<const double> toward,
                             std::span<const double> plus, std::span<const double> minus,
                             double blend, double F);

/// Dispatches to the generator for `strategy`.
Vector generate_trial(StrategyId strategy, std::span<const Individual> pop, std::size_t target,
                      const ControlParameters& params, double p_fraction,
                      std::span<const std::size_t> sf_order, const Problem& problem, Rng& rng);

}  // namespace ppsde
