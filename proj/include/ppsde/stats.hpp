#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ppsde {

struct Summary {
    double mean = 0.0;
    double std = 0.0;  // n - 1 denominator, 0 for a single value
    double best = 0.0;
    double worst = 0.0;
    double median = 0.0;
};

Summary summarize(std::span<const double> values);

using Matrix = std::vector<std::vector<double>>;

/// Average ranks of a flat sample, ties sharing the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

struct FriedmanResult {
    Matrix joint_ranks;               // problems x algorithms
    std::vector<double> average_ranks;  // per algorithm
    double statistic = 0.0;
    std::size_t degrees_of_freedom = 0;
    double p_value = 1.0;
};

/// Friedman aligned-ranks test over `cell_means` (rows: problems, columns:
/// algorithms). Each row is centred on its mean, all aligned values are
/// ranked jointly, and the Hodges-Lehmann statistic is referred to a
/// chi-square distribution with k - 1 degrees of freedom.
FriedmanResult friedman_aligned(const Matrix& cell_means);

/// Final outcomes of the runs of one (problem, algorithm) cell.
struct CellRuns {
    std::vector<double> best_f;
    std::vector<double> best_phi;

    std::size_t runs() const noexcept { return best_f.size(); }
    std::size_t feasible_runs() const noexcept;
    std::vector<double> feasible_values() const;
};

/// Value fed to the ranking: mean feasible f, or mean phi when no run of the
/// cell ended feasible.
struct RankingValue {
    double value = 0.0;
    bool from_violation = false;
};

RankingValue ranking_value(const CellRuns& cell);

class RunTable {
public:
    RunTable(std::vector<std::string> problems, std::vector<std::string> algorithms);

    const std::vector<std::string>& problems() const noexcept { return problems_; }
    const std::vector<std::string>& algorithms() const noexcept { return algorithms_; }

    CellRuns& cell(std::size_t problem, std::size_t algorithm);
    const CellRuns& cell(std::size_t problem, std::size_t algorithm) const;

    /// Throws when run counts differ within a row.
    void validate() const;

    Matrix ranking_matrix() const;

private:
    std::vector<std::string> problems_;
    std::vector<std::string> algorithms_;
    std::vector<CellRuns> cells_;
};

}  // namespace ppsde
