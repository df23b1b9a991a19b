#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "ppsde/stats.hpp"

using namespace ppsde;

namespace {

/// rank(v) = 1 + #{w < v} + (#{w == v} - 1) / 2, computed by full scan.
Matrix brute_force_ranks(const Matrix& m) {
    Matrix aligned = m;
    for (auto& row : aligned) {
        double mean = 0.0;
        for (const double v : row) {
            mean += v;
        }
        mean /= static_cast<double>(row.size());
        for (auto& v : row) {
            v -= mean;
        }
    }
    Matrix ranks = aligned;
    for (std::size_t i = 0; i < aligned.size(); ++i) {
        for (std::size_t j = 0; j < aligned[i].size(); ++j) {
            double less = 0.0;
            double equal = 0.0;
            for (const auto& row : aligned) {
                for (const double w : row) {
                    less += w < aligned[i][j] ? 1.0 : 0.0;
                    equal += w == aligned[i][j] ? 1.0 : 0.0;
                }
            }
            ranks[i][j] = 1.0 + less + (equal - 1.0) / 2.0;
        }
    }
    return ranks;
}

/// Aligned-ranks statistic written out from row and column rank sums.
double statistic_from_ranks(const Matrix& ranks) {
    const double n = static_cast<double>(ranks.size());
    const double k = static_cast<double>(ranks.front().size());
    double col_sq = 0.0;
    for (std::size_t j = 0; j < ranks.front().size(); ++j) {
        double s = 0.0;
        for (const auto& row : ranks) {
            s += row[j];
        }
        col_sq += s * s;
    }
    double row_sq = 0.0;
    for (const auto& row : ranks) {
        double s = 0.0;
        for (const double r : row) {
            s += r;
        }
        row_sq += s * s;
    }
    const double nk = n * k;
    const double num = (k - 1.0) * (col_sq - (k * n * n / 4.0) * (nk + 1.0) * (nk + 1.0));
    const double den = nk * (nk + 1.0) * (2.0 * nk + 1.0) / 6.0 - row_sq / k;
    return num / den;
}

Matrix random_matrix(std::size_t n, std::size_t k, std::mt19937_64& rng, bool coarse) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::uniform_int_distribution<int> small(0, 3);
    Matrix m(n, std::vector<double>(k));
    for (auto& row : m) {
        for (auto& v : row) {
            v = coarse ? static_cast<double>(small(rng)) : u(rng);
        }
    }
    return m;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("summarize examples") {
    const std::vector<double> a{1, 2, 3};
    const Summary s = summarize(a);
    CHECK(s.mean == 2.0);
    CHECK(s.std == 1.0);
    CHECK(s.best == 1.0);
    CHECK(s.worst == 3.0);
    CHECK(s.median == 2.0);

    const std::vector<double> one{5};
    CHECK(summarize(one).mean == 5.0);
    CHECK(summarize(one).std == 0.0);

    const std::vector<double> zeros(4, 0.0);
    const Summary z = summarize(zeros);
    CHECK(z.mean == 0.0);
    CHECK(z.std == 0.0);
    CHECK(z.median == 0.0);

    const std::vector<double> even{4, 1, 3, 2};
    CHECK(summarize(even).median == 2.5);

    CHECK_THROWS_AS(summarize(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("average ranks share ties") {
    const std::vector<double> v{3.0, 1.0, 3.0, 2.0};
    CHECK(average_ranks(v) == std::vector<double>{3.5, 1.0, 3.5, 2.0});
}

TEST_CASE("aligned Friedman on the 2x2 example") {
    const FriedmanResult r = friedman_aligned({{1, 2}, {3, 5}});
    CHECK(r.joint_ranks == Matrix{{2, 3}, {1, 4}});
    CHECK(r.average_ranks == std::vector<double>{1.5, 3.5});
    CHECK(r.degrees_of_freedom == 1);
    CHECK(r.statistic == doctest::Approx(1.6));
    // Chi-square with one degree of freedom: P(X > t) = erfc(sqrt(t / 2)).
    CHECK(r.p_value == doctest::Approx(std::erfc(std::sqrt(0.8))).epsilon(1e-12));
}

TEST_CASE("identical columns give equal average ranks") {
    const FriedmanResult r = friedman_aligned({{1, 1}, {4, 4}, {-2, -2}});
    CHECK(r.average_ranks[0] == r.average_ranks[1]);
}

TEST_CASE("column permutation permutes average ranks") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        const Matrix m = random_matrix(6, 4, rng, rep % 2 == 0);
        Matrix swapped = m;
        for (auto& row : swapped) {
            std::swap(row[0], row[3]);
        }
        const FriedmanResult a = friedman_aligned(m);
        const FriedmanResult b = friedman_aligned(swapped);
        CHECK(a.average_ranks[0] == b.average_ranks[3]);
        CHECK(a.average_ranks[3] == b.average_ranks[0]);
        CHECK(a.average_ranks[1] == b.average_ranks[1]);
        CHECK(a.statistic == doctest::Approx(b.statistic));
    }
}

TEST_CASE("row offsets do not change the ranking") {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 50; ++rep) {
        // Four columns keep integer row means exact, so alignment is exact.
        const Matrix m = random_matrix(5, 4, rng, true);
        Matrix shifted = m;
        for (auto& v : shifted[2]) {
            v += 64.0;
        }
        CHECK(friedman_aligned(m).average_ranks == friedman_aligned(shifted).average_ranks);
    }
}

TEST_CASE("joint ranks match a brute-force oracle") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 500; ++rep) {
        const Matrix m = random_matrix(5, 3, rng, rep % 2 == 0);
        const FriedmanResult r = friedman_aligned(m);
        const Matrix expected = brute_force_ranks(m);
        REQUIRE(r.joint_ranks == expected);
        double total = 0.0;
        for (const auto& row : r.joint_ranks) {
            for (const double x : row) {
                total += x;
            }
        }
        CHECK(total == 15.0 * 16.0 / 2.0);
        CHECK(r.statistic == doctest::Approx(statistic_from_ranks(expected)));
        // Two degrees of freedom: P(X > t) = exp(-t / 2).
        CHECK(r.p_value == doctest::Approx(std::exp(-r.statistic / 2.0)).epsilon(1e-10));
    }
}

TEST_CASE("a dominant algorithm gets the lowest average rank") {
    const FriedmanResult r = friedman_aligned({{0.1, 3, 2}, {5, 9, 7}, {-3, 0, 1}, {10, 12, 11}});
    CHECK(r.average_ranks[0] < r.average_ranks[1]);
    CHECK(r.average_ranks[0] < r.average_ranks[2]);
}

TEST_CASE("friedman_aligned rejects malformed input") {
    CHECK_THROWS_AS(friedman_aligned({{1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(friedman_aligned({{1}, {2}}), std::invalid_argument);
    CHECK_THROWS_AS(friedman_aligned({{1, 2}, {3}}), std::invalid_argument);
    CHECK_THROWS_AS(friedman_aligned({{1, NAN}, {3, 4}}), std::invalid_argument);
}

TEST_CASE("run table ranking values") {
    RunTable table({"P1", "P2"}, {"a", "b"});
    table.cell(0, 0) = {{1.0, 3.0}, {0.0, 0.0}};
    table.cell(0, 1) = {{9.0, 2.0}, {0.5, 0.0}};
    table.cell(1, 0) = {{4.0, 4.0}, {0.25, 0.5}};
    table.cell(1, 1) = {{1.0, 1.0}, {0.0, 0.0}};
    CHECK_NOTHROW(table.validate());

    CHECK(table.cell(0, 1).feasible_runs() == 1);
    const RankingValue v = ranking_value(table.cell(1, 0));
    CHECK(v.from_violation);
    CHECK(v.value == 0.375);
    CHECK(table.ranking_matrix() == Matrix{{2.0, 2.0}, {0.375, 1.0}});

    table.cell(1, 1).best_f.push_back(1.0);
    table.cell(1, 1).best_phi.push_back(0.0);
    CHECK_THROWS_AS(table.validate(), std::logic_error);
}

}  // TEST_SUITE
