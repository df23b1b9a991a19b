#include "ppsde/comparator.hpp"

#include <algorithm>
#include <numeric>

namespace ppsde {

namespace {

Comparison by_value(double a, double b) noexcept {
    if (a < b) {
        return Comparison::first_better;
    }
    if (b < a) {
        return Comparison::second_better;
    }
    return Comparison::tie;
}

}  // namespace

Comparison sf_compare(const Evaluation& a, const Evaluation& b) noexcept {
    const bool fa = is_feasible(a);
    const bool fb = is_feasible(b);
    if (fa && fb) {
        return by_value(a.f, b.f);
    }
    if (fa != fb) {
        return fa ? Comparison::first_better : Comparison::second_better;
    }
    if (a.phi == b.phi) {
        return by_value(a.f, b.f);
    }
    return by_value(a.phi, b.phi);
}

Decision push_decision(const Evaluation& parent, const Evaluation& trial) noexcept {
    return {trial.f <= parent.f, DecisionBasis::objective};
}

bool push_select(const Individual& parent, const Individual& trial) noexcept {
    return push_decision(parent.eval, trial.eval).accepted;
}

Decision pull_decision(const Evaluation& parent, const Evaluation& trial, double eps) noexcept {
    if (trial.phi <= eps && parent.phi <= eps) {
        return {trial.f <= parent.f, DecisionBasis::objective};
    }
    if (trial.phi == parent.phi) {
        return {trial.f <= parent.f, DecisionBasis::objective};
    }
    return {trial.phi < parent.phi, DecisionBasis::violation};
}

bool pull_select(const Individual& parent, const Individual& trial, double eps) noexcept {
    return pull_decision(parent.eval, trial.eval, eps).accepted;
}

Decision sf_decision(const Evaluation& parent, const Evaluation& trial) noexcept {
    const DecisionBasis basis =
        parent.phi == trial.phi ? DecisionBasis::objective : DecisionBasis::violation;
    return {sf_compare(parent, trial) != Comparison::first_better, basis};
}

std::vector<std::size_t> sort_sf(std::span<const Individual> population) {
    std::vector<std::size_t> order(population.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return sf_compare(population[i], population[j]) == Comparison::first_better;
    });
    return order;
}

}  // namespace ppsde
