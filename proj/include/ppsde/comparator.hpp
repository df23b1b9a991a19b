#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ppsde/problem.hpp"

namespace ppsde {

enum class Comparison { first_better, second_better, tie };

/// Which quantity decided an acceptance. Selects the improvement measure
/// (|delta f| or |delta phi|) fed to parameter adaptation.
enum class DecisionBasis { objective, violation };

struct Decision {
    bool accepted = false;
    DecisionBasis basis = DecisionBasis::objective;
};

/// Superiority of feasible solutions.
///
/// Feasible beats infeasible, lower phi wins between infeasible pairs, lower f
/// wins between feasible pairs. Two infeasible solutions with identical phi are
/// ordered by f, which keeps the rule identical to the epsilon comparison at
/// epsilon = 0.
Comparison sf_compare(const Evaluation& a, const Evaluation& b) noexcept;
inline Comparison sf_compare(const Individual& a, const Individual& b) noexcept {
    return sf_compare(a.eval, b.eval);
}

/// Objective-only acceptance: trial replaces parent iff f(trial) <= f(parent).
bool push_select(const Individual& parent, const Individual& trial) noexcept;
Decision push_decision(const Evaluation& parent, const Evaluation& trial) noexcept;

/// Epsilon-level acceptance, branches evaluated in this order:
///   both phi <= eps     -> f(trial) <= f(parent)
///   phi(trial) == phi(parent) -> f(trial) <= f(parent)
///   otherwise           -> phi(trial) < phi(parent)
bool pull_select(const Individual& parent, const Individual& trial, double eps) noexcept;
Decision pull_decision(const Evaluation& parent, const Evaluation& trial, double eps) noexcept;

/// Trial replaces parent unless sf_compare ranks the parent strictly better.
Decision sf_decision(const Evaluation& parent, const Evaluation& trial) noexcept;

/// Index permutation, best first under sf_compare. Stable on ties.
std::vector<std::size_t> sort_sf(std::span<const Individual> population);

}  // namespace ppsde
