#include "ppsde/pps_controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ppsde {

std::string_view to_string(Phase phase) noexcept {
    return phase == Phase::push ? "push" : "pull";
}

SwitchState::SwitchState(SwitchParams params) : params_(params) {
    if (params_.learning_period == 0) {
        throw std::invalid_argument("learning period must be positive");
    }
    if (!(params_.delta > 0.0)) {
        throw std::invalid_argument("delta must be positive");
    }
}

double SwitchState::update_rate(std::size_t generation, double best_f_now) {
    const std::size_t expected = last_generation_ ? *last_generation_ + 1 : 0;
    if (generation != expected) {
        throw std::invalid_argument("generations must be reported consecutively");
    }
    last_generation_ = generation;

    history_.push_back(best_f_now);
    while (history_.size() > params_.learning_period + 1) {
        history_.pop_front();
    }
    if (generation < params_.learning_period) {
        rate_ = 1.0;
    } else {
        const double past = history_.front();
        rate_ = (past - best_f_now) / std::max(std::abs(past), params_.delta);
    }
    return rate_;
}

bool SwitchState::should_switch() {
    if (phase_ != Phase::push || !(rate_ <= params_.threshold)) {
        return false;
    }
    phase_ = Phase::pull;
    switch_generation_ = last_generation_.value_or(0);
    return true;
}

EpsilonState::EpsilonState(EpsilonParams params) : params_(params) {
    if (!(params_.tau >= 0.0 && params_.tau <= 1.0)) {
        throw std::invalid_argument("tau must lie in [0, 1]");
    }
    if (!(params_.cutoff > 0.0)) {
        throw std::invalid_argument("epsilon cutoff generation must be positive");
    }
}

void EpsilonState::start(double eps0) {
    if (!(eps0 >= 0.0)) {
        throw std::invalid_argument("initial epsilon must be non-negative");
    }
    started_ = true;
    eps0_ = eps0;
    eps_ = eps0;
    k_ = 0;
}

double EpsilonState::level(std::size_t k, double feasible_ratio) {
    if (!started_) {
        return kPushEpsilon;
    }
    if (k < k_) {
        throw std::invalid_argument("epsilon step counter went backwards");
    }
    if (k == k_) {
        return eps_;  // memoized; k = 0 is eps_0 itself
    }
    k_ = k;
    if (static_cast<double>(k) >= params_.cutoff) {
        eps_ = 0.0;
    } else if (feasible_ratio < params_.alpha) {
        eps_ = (1.0 - params_.tau) * eps_;
    } else {
        eps_ = eps0_ * std::pow(1.0 - static_cast<double>(k) / params_.cutoff, params_.cp);
    }
    return eps_;
}

double initial_epsilon(std::span<const double> phis, double theta) {
    if (phis.empty()) {
        return 0.0;
    }
    std::vector<double> sorted(phis.begin(), phis.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    const auto rank = static_cast<std::size_t>(std::ceil(theta * n));
    const std::size_t idx = std::clamp<std::size_t>(rank, 1, sorted.size()) - 1;
    return sorted[idx];
}

}  // namespace ppsde
