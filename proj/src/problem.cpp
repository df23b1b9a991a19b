#include "ppsde/problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace ppsde {

namespace {

std::string describe(EvaluationError::Source source, std::size_t index, double value) {
    std::ostringstream os;
    switch (source) {
    case EvaluationError::Source::objective:
        os << "objective";
        break;
    case EvaluationError::Source::inequality:
        os << "inequality constraint " << index;
        break;
    case EvaluationError::Source::equality:
        os << "equality constraint " << index;
        break;
    }
    os << " returned non-finite value " << value;
    return os.str();
}

}  // namespace

EvaluationError::EvaluationError(Source source, std::size_t index, double value)
    : std::runtime_error(describe(source, index, value)), source_(source), index_(index),
      value_(value) {}

Problem::Problem(std::string name, Vector lower, Vector upper, ScalarFunction objective,
                 std::vector<ScalarFunction> inequalities,
                 std::vector<ScalarFunction> equalities, double sigma)
    : name_(std::move(name)), lower_(std::move(lower)), upper_(std::move(upper)),
      objective_(std::move(objective)), inequalities_(std::move(inequalities)),
      equalities_(std::move(equalities)), sigma_(sigma) {
    if (lower_.empty()) {
        throw std::invalid_argument("problem dimension must be positive");
    }
    if (lower_.size() != upper_.size()) {
        throw std::invalid_argument("lower and upper bounds differ in length");
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!(lower_[i] < upper_[i])) {
            throw std::invalid_argument("lower bound must be below upper bound in dimension " +
                                        std::to_string(i));
        }
    }
    if (!(sigma_ >= 0.0)) {
        throw std::invalid_argument("equality tolerance must be non-negative");
    }
    if (!objective_) {
        throw std::invalid_argument("problem has no objective");
    }
}

Problem& Problem::set_known_optimum(double value, std::optional<Vector> point) {
    if (point && point->size() != dim()) {
        throw std::invalid_argument("known optimizer has wrong dimension");
    }
    known_optimum_ = value;
    known_optimizer_ = std::move(point);
    return *this;
}

bool Problem::contains(std::span<const double> x) const noexcept {
    if (x.size() != dim()) {
        return false;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) {
            return false;
        }
    }
    return true;
}

Evaluation Problem::evaluate(std::span<const double> x) const {
    if (x.size() != dim()) {
        throw std::invalid_argument("decision vector has length " + std::to_string(x.size()) +
                                    ", expected " + std::to_string(dim()));
    }
    if (!contains(x)) {
        throw std::invalid_argument("decision vector lies outside the bounds of " + name_);
    }

    Evaluation eval;
    eval.f = objective_(x);
    if (!std::isfinite(eval.f)) {
        throw EvaluationError(EvaluationError::Source::objective, 0, eval.f);
    }
    eval.g_values.reserve(inequalities_.size());
    for (std::size_t i = 0; i < inequalities_.size(); ++i) {
        const double g = inequalities_[i](x);
        if (!std::isfinite(g)) {
            throw EvaluationError(EvaluationError::Source::inequality, i, g);
        }
        eval.g_values.push_back(g);
    }
    eval.h_values.reserve(equalities_.size());
    for (std::size_t j = 0; j < equalities_.size(); ++j) {
        const double h = equalities_[j](x);
        if (!std::isfinite(h)) {
            throw EvaluationError(EvaluationError::Source::equality, j, h);
        }
        eval.h_values.push_back(h);
    }
    eval.phi = overall_violation(eval.g_values, eval.h_values, sigma_);
    return eval;
}

Problem Problem::with_constraints(std::vector<ScalarFunction> inequalities,
                                  std::vector<ScalarFunction> equalities) const {
    Problem copy = *this;
    copy.inequalities_ = std::move(inequalities);
    copy.equalities_ = std::move(equalities);
    return copy;
}

double overall_violation(std::span<const double> g_values, std::span<const double> h_values,
                         double sigma) noexcept {
    double phi = 0.0;
    for (const double g : g_values) {
        phi += std::max(g, 0.0);
    }
    for (const double h : h_values) {
        phi += std::max(std::abs(h) - sigma, 0.0);
    }
    return phi;
}

// ---------------------------------------------------------------------------
// Suite

namespace {

struct SuiteName {
    SuiteId id;
    std::string_view full;
    std::string_view short_name;
};

constexpr std::array<SuiteName, 5> kSuiteNames{{
    {SuiteId::sphere_shifted, "P1-sphere-shifted", "P1"},
    {SuiteId::active_linear, "P2-active-linear", "P2"},
    {SuiteId::equality, "P3-equality", "P3"},
    {SuiteId::disconnected, "P4-disconnected", "P4"},
    {SuiteId::rosenbrock_ball, "P5-rosenbrock-ball", "P5"},
}};

double inf_norm_distance(std::span<const double> x, double center) {
    double m = 0.0;
    for (const double xi : x) {
        m = std::max(m, std::abs(xi - center));
    }
    return m;
}

double sum_sq_shifted(std::span<const double> x, double shift) {
    double s = 0.0;
    for (const double xi : x) {
        const double d = xi - shift;
        s += d * d;
    }
    return s;
}

}  // namespace

std::string_view to_string(SuiteId id) noexcept {
    for (const auto& entry : kSuiteNames) {
        if (entry.id == id) {
            return entry.full;
        }
    }
    return "unknown";
}

SuiteId parse_suite_id(std::string_view text) {
    for (const auto& entry : kSuiteNames) {
        if (text == entry.full || text == entry.short_name) {
            return entry.id;
        }
    }
    std::string valid;
    for (const auto& entry : kSuiteNames) {
        valid += valid.empty() ? "" : ", ";
        valid += entry.full;
    }
    throw std::invalid_argument("unknown problem id '" + std::string(text) +
                                "' (valid: " + valid + ")");
}

Problem make_suite_problem(std::string_view id, std::size_t dim, double sigma) {
    return make_suite_problem(parse_suite_id(id), dim, sigma);
}

Problem make_suite_problem(SuiteId id, std::size_t dim, double sigma) {
    if (dim < 2) {
        throw std::invalid_argument("suite problems need dim >= 2");
    }
    const Vector lower(dim, -5.0);
    const Vector upper(dim, 5.0);
    const auto d = static_cast<double>(dim);
    const std::string name(to_string(id));

    switch (id) {
    case SuiteId::sphere_shifted: {
        Problem p(name, lower, upper, [](std::span<const double> x) { return sum_sq_shifted(x, 0.5); },
                  {[](std::span<const double> x) { return x[0] - 100.0; }}, {}, sigma);
        p.set_known_optimum(0.0, Vector(dim, 0.5));
        return p;
    }
    case SuiteId::active_linear: {
        Problem p(name, lower, upper, [](std::span<const double> x) { return sum_sq_shifted(x, 0.0); },
                  {[](std::span<const double> x) {
                      return 1.0 - std::accumulate(x.begin(), x.end(), 0.0);
                  }},
                  {}, sigma);
        p.set_known_optimum(1.0 / d, Vector(dim, 1.0 / d));
        return p;
    }
    case SuiteId::equality: {
        Problem p(name, lower, upper, [](std::span<const double> x) { return sum_sq_shifted(x, 0.0); },
                  {}, {[](std::span<const double> x) { return x[0] + x[1] - 1.0; }}, sigma);
        Vector opt(dim, 0.0);
        opt[0] = opt[1] = 0.5;
        p.set_known_optimum(0.5, std::move(opt));
        return p;
    }
    case SuiteId::disconnected: {
        // Two feasible boxes, around the origin and around 2*1.
        Problem p(name, lower, upper, [](std::span<const double> x) { return sum_sq_shifted(x, 2.0); },
                  {[](std::span<const double> x) {
                      return std::min(inf_norm_distance(x, 0.0) - 0.5,
                                      inf_norm_distance(x, 2.0) - 0.5);
                  }},
                  {}, sigma);
        p.set_known_optimum(0.0, Vector(dim, 2.0));
        return p;
    }
    case SuiteId::rosenbrock_ball: {
        Problem p(name, lower, upper,
                  [](std::span<const double> x) {
                      double s = 0.0;
                      for (std::size_t i = 0; i + 1 < x.size(); ++i) {
                          const double a = x[i + 1] - x[i] * x[i];
                          const double b = 1.0 - x[i];
                          s += 100.0 * a * a + b * b;
                      }
                      return s;
                  },
                  {[d](std::span<const double> x) { return sum_sq_shifted(x, 0.0) - 2.0 * d; }}, {},
                  sigma);
        p.set_known_optimum(0.0, Vector(dim, 1.0));
        return p;
    }
    }
    throw std::invalid_argument("unknown suite id");
}

}  // namespace ppsde
