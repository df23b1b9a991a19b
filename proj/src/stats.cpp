#include "ppsde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace ppsde {

Summary summarize(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("cannot summarize an empty sample");
    }
    const auto n = static_cast<double>(values.size());
    Summary s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (const double v : values) {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.std = std::sqrt(ss / (n - 1.0));
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    s.best = sorted.front();
    s.worst = sorted.back();
    const std::size_t mid = sorted.size() / 2;
    s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return s;
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        // positions i..j (0-based) share rank mean of (i+1)..(j+1)
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            ranks[order[t]] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

FriedmanResult friedman_aligned(const Matrix& cell_means) {
    const std::size_t n = cell_means.size();
    if (n < 2) {
        throw std::invalid_argument("aligned Friedman test needs at least 2 problems");
    }
    const std::size_t k = cell_means.front().size();
    if (k < 2) {
        throw std::invalid_argument("aligned Friedman test needs at least 2 algorithms");
    }
    for (const auto& row : cell_means) {
        if (row.size() != k) {
            throw std::invalid_argument("aligned Friedman test: missing cells");
        }
        for (const double v : row) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("aligned Friedman test: non-finite cell");
            }
        }
    }

    std::vector<double> aligned;
    aligned.reserve(n * k);
    for (const auto& row : cell_means) {
        const double mean = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(k);
        for (const double v : row) {
            aligned.push_back(v - mean);
        }
    }
    const auto flat = average_ranks(aligned);

    FriedmanResult r;
    r.joint_ranks.assign(n, std::vector<double>(k));
    std::vector<double> col_sum(k, 0.0);
    std::vector<double> row_sum(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double rank = flat[i * k + j];
            r.joint_ranks[i][j] = rank;
            col_sum[j] += rank;
            row_sum[i] += rank;
        }
    }
    r.average_ranks.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        r.average_ranks[j] = col_sum[j] / static_cast<double>(n);
    }

    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(k);
    const double nk = nd * kd;
    double sum_col_sq = 0.0;
    for (const double c : col_sum) {
        sum_col_sq += c * c;
    }
    double sum_row_sq = 0.0;
    for (const double rs : row_sum) {
        sum_row_sq += rs * rs;
    }
    const double numerator = (kd - 1.0) * (sum_col_sq - (kd * nd * nd / 4.0) * (nk + 1.0) * (nk + 1.0));
    const double denominator = nk * (nk + 1.0) * (2.0 * nk + 1.0) / 6.0 - sum_row_sq / kd;

    r.degrees_of_freedom = k - 1;
    if (denominator > 0.0) {
        r.statistic = std::max(numerator / denominator, 0.0);
        const boost::math::chi_squared dist(static_cast<double>(r.degrees_of_freedom));
        r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    } else {
        r.statistic = 0.0;
        r.p_value = 1.0;
    }
    return r;
}

std::size_t CellRuns::feasible_runs() const noexcept {
    return static_cast<std::size_t>(std::count(best_phi.begin(), best_phi.end(), 0.0));
}

std::vector<double> CellRuns::feasible_values() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < best_f.size(); ++i) {
        if (best_phi[i] == 0.0) {
            out.push_back(best_f[i]);
        }
    }
    return out;
}

RankingValue ranking_value(const CellRuns& cell) {
    const auto feasible = cell.feasible_values();
    if (!feasible.empty()) {
        return {summarize(feasible).mean, false};
    }
    if (cell.best_phi.empty()) {
        throw std::invalid_argument("empty cell");
    }
    return {summarize(cell.best_phi).mean, true};
}

RunTable::RunTable(std::vector<std::string> problems, std::vector<std::string> algorithms)
    : problems_(std::move(problems)), algorithms_(std::move(algorithms)),
      cells_(problems_.size() * algorithms_.size()) {}

CellRuns& RunTable::cell(std::size_t problem, std::size_t algorithm) {
    return cells_.at(problem * algorithms_.size() + algorithm);
}

const CellRuns& RunTable::cell(std::size_t problem, std::size_t algorithm) const {
    return cells_.at(problem * algorithms_.size() + algorithm);
}

void RunTable::validate() const {
    for (std::size_t p = 0; p < problems_.size(); ++p) {
        for (std::size_t a = 0; a < algorithms_.size(); ++a) {
            const CellRuns& c = cell(p, a);
            if (c.best_f.size() != c.best_phi.size()) {
                throw std::logic_error("cell outcome vectors differ in length");
            }
            if (c.runs() != cell(p, 0).runs()) {
                throw std::logic_error("unequal run counts in row " + problems_[p]);
            }
        }
    }
}

Matrix RunTable::ranking_matrix() const {
    Matrix m(problems_.size(), std::vector<double>(algorithms_.size()));
    for (std::size_t p = 0; p < problems_.size(); ++p) {
        for (std::size_t a = 0; a < algorithms_.size(); ++a) {
            m[p][a] = ranking_value(cell(p, a)).value;
        }
    }
    return m;
}

}  // namespace ppsde
