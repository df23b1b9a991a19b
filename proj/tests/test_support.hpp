#pragma once

#include <random>

#include "ppsde/problem.hpp"

namespace ppsde::test {

inline Individual make_ind(double f, double phi, Vector x = {}) {
    Individual ind;
    ind.x = std::move(x);
    ind.eval.f = f;
    ind.eval.phi = phi;
    return ind;
}

/// Random evaluation with a mix of feasible, tied-phi and distinct-phi cases.
inline Evaluation random_eval(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    std::uniform_int_distribution<int> coarse(0, 3);
    Evaluation e;
    e.f = kind(rng) == 0 ? static_cast<double>(coarse(rng)) : val(rng);
    switch (kind(rng)) {
    case 0:
        e.phi = 0.0;
        break;
    case 1:
        e.phi = static_cast<double>(coarse(rng));  // frequent exact ties
        break;
    default:
        e.phi = std::abs(val(rng));
        break;
    }
    return e;
}

}  // namespace ppsde::test
