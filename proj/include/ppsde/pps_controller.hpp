#pragma once

#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <string_view>

namespace ppsde {

enum class Phase { push, pull };

std::string_view to_string(Phase phase) noexcept;

struct SwitchParams {
    std::size_t learning_period = 25;  // L
    double threshold = 1e-3;           // switch when r_G <= threshold
    double delta = 1e-6;               // denominator floor
};

/// Push-to-pull switch driven by the relative change of the minimal
/// objective value over the last L generations.
class SwitchState {
public:
    explicit SwitchState(SwitchParams params = {});

    const SwitchParams& params() const noexcept { return params_; }
    Phase phase() const noexcept { return phase_; }
    double rate() const noexcept { return rate_; }
    std::optional<std::size_t> switch_generation() const noexcept { return switch_generation_; }

    /// Records the minimal objective of generation G and returns r_G
    /// (1.0 while G < L). Generations must be reported consecutively from 0.
    double update_rate(std::size_t generation, double best_f_now);

    /// Flips push -> pull when r_G <= threshold; returns true only on the flip.
    bool should_switch();

private:
    SwitchParams params_;
    std::deque<double> history_;  // f_{G-L} .. f_G
    std::optional<std::size_t> last_generation_;
    double rate_ = 1.0;
    Phase phase_ = Phase::push;
    std::optional<std::size_t> switch_generation_;
};

struct EpsilonParams {
    double tau = 0.1;       // shrink rate while feasibility is scarce
    double alpha = 0.95;    // feasible-ratio trigger
    double cp = 2.0;        // decay exponent
    double cutoff = 100.0;  // Tc, in generations since the switch
    double theta = 0.95;    // percentile used for the initial level
};

inline constexpr double kPushEpsilon = std::numeric_limits<double>::infinity();

/// Epsilon level of the pull phase.
///
///   k >= Tc               -> 0
///   feasible_ratio < alpha -> (1 - tau) * previous level
///   otherwise             -> eps_0 * (1 - k / Tc)^cp
class EpsilonState {
public:
    explicit EpsilonState(EpsilonParams params = {});

    const EpsilonParams& params() const noexcept { return params_; }
    bool started() const noexcept { return started_; }
    double initial() const noexcept { return eps0_; }
    double current() const noexcept { return started_ ? eps_ : kPushEpsilon; }
    std::size_t step() const noexcept { return k_; }

    /// Fixes eps_0 and resets the pull-generation counter to 0.
    void start(double eps0);

    /// Level for pull generation k; +inf before start(). Throws if k decreases.
    double level(std::size_t k, double feasible_ratio);

private:
    EpsilonParams params_;
    bool started_ = false;
    double eps0_ = 0.0;
    double eps_ = 0.0;
    std::size_t k_ = 0;
};

/// phi at the theta-percentile of the given violations (nearest-rank).
double initial_epsilon(std::span<const double> phis, double theta);

}  // namespace ppsde
