#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ppsde {

inline constexpr double kDefaultEqualityTolerance = 1e-4;

using Vector = std::vector<double>;
using ScalarFunction = std::function<double(std::span<const double>)>;

/// Thrown when an objective or constraint returns a non-finite value.
class EvaluationError : public std::runtime_error {
public:
    enum class Source { objective, inequality, equality };

    EvaluationError(Source source, std::size_t index, double value);

    Source source() const noexcept { return source_; }
    /// Index of the offending constraint (0 for the objective).
    std::size_t index() const noexcept { return index_; }
    double value() const noexcept { return value_; }

private:
    Source source_;
    std::size_t index_;
    double value_;
};

struct Evaluation {
    double f = 0.0;
    Vector g_values;
    Vector h_values;
    double phi = 0.0;
};

struct Individual {
    Vector x;
    Evaluation eval;
};

using Population = std::vector<Individual>;

/// Box-bounded constrained minimization problem.
///
/// Inequalities are feasible when g(x) <= 0, equalities when |h(x)| <= sigma.
/// Instances are immutable once built, so a single problem may be evaluated
/// from several threads at once.
class Problem {
public:
    Problem(std::string name, Vector lower, Vector upper, ScalarFunction objective,
            std::vector<ScalarFunction> inequalities = {},
            std::vector<ScalarFunction> equalities = {},
            double sigma = kDefaultEqualityTolerance);

    const std::string& name() const noexcept { return name_; }
    std::size_t dim() const noexcept { return lower_.size(); }
    const Vector& lower() const noexcept { return lower_; }
    const Vector& upper() const noexcept { return upper_; }
    double sigma() const noexcept { return sigma_; }
    std::size_t num_inequalities() const noexcept { return inequalities_.size(); }
    std::size_t num_equalities() const noexcept { return equalities_.size(); }

    const std::optional<double>& known_optimum() const noexcept { return known_optimum_; }
    const std::optional<Vector>& known_optimizer() const noexcept { return known_optimizer_; }
    Problem& set_known_optimum(double value, std::optional<Vector> point = std::nullopt);

    bool contains(std::span<const double> x) const noexcept;

    Evaluation evaluate(std::span<const double> x) const;

    /// Copy of this problem with the given constraint lists.
    Problem with_constraints(std::vector<ScalarFunction> inequalities,
                             std::vector<ScalarFunction> equalities) const;

private:
    std::string name_;
    Vector lower_;
    Vector upper_;
    ScalarFunction objective_;
    std::vector<ScalarFunction> inequalities_;
    std::vector<ScalarFunction> equalities_;
    double sigma_;
    std::optional<double> known_optimum_;
    std::optional<Vector> known_optimizer_;
};

/// phi = sum max(g, 0) + sum max(|h| - sigma, 0)
double overall_violation(std::span<const double> g_values, std::span<const double> h_values,
                         double sigma) noexcept;

inline Evaluation evaluate(const Problem& problem, std::span<const double> x) {
    return problem.evaluate(x);
}

inline bool is_feasible(const Evaluation& eval) noexcept { return eval.phi == 0.0; }
inline bool is_feasible(const Individual& ind) noexcept { return is_feasible(ind.eval); }

// Built-in analytic suite.

enum class SuiteId { sphere_shifted, active_linear, equality, disconnected, rosenbrock_ball };

inline constexpr SuiteId kAllSuiteIds[] = {SuiteId::sphere_shifted, SuiteId::active_linear,
                                           SuiteId::equality, SuiteId::disconnected,
                                           SuiteId::rosenbrock_ball};

std::string_view to_string(SuiteId id) noexcept;

/// Accepts the full name ("P2-active-linear") or its short form ("P2").
SuiteId parse_suite_id(std::string_view text);

Problem make_suite_problem(SuiteId id, std::size_t dim, double sigma = kDefaultEqualityTolerance);
Problem make_suite_problem(std::string_view id, std::size_t dim,
                           double sigma = kDefaultEqualityTolerance);

}  // namespace ppsde
