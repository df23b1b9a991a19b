#include "ppsde/de_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ppsde {

std::string_view to_string(StrategyId id) noexcept {
    switch (id) {
    case StrategyId::rand_1_bin:
        return "rand-1-bin";
    case StrategyId::current_to_pbest_1:
        return "current-to-pbest-1";
    case StrategyId::current_to_rand_1:
        return "current-to-rand-1";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Parameter memory

ParameterMemory::ParameterMemory(std::size_t history_size) : history_size_(history_size) {
    if (history_size == 0) {
        throw std::invalid_argument("memory size must be positive");
    }
    for (auto& m : per_strategy_) {
        m.m_f.assign(history_size, kInitialMemoryValue);
        m.m_cr.assign(history_size, kInitialMemoryValue);
    }
}

std::optional<double> clamp_scale_factor(double raw) noexcept {
    if (!(raw > 0.0)) {
        return std::nullopt;
    }
    return std::min(raw, 1.0);
}

double truncate_crossover_rate(double raw) noexcept { return std::clamp(raw, 0.0, 1.0); }

ControlParameters sample_parameters(const ParameterMemory& memory, StrategyId strategy, Rng& rng) {
    const StrategyMemory& m = memory[strategy];
    std::uniform_int_distribution<std::size_t> pick(0, memory.history_size() - 1);
    const std::size_t k = pick(rng);

    std::cauchy_distribution<double> cauchy(m.m_f[k], kParameterSpread);
    std::optional<double> F;
    while (!F) {
        F = clamp_scale_factor(cauchy(rng));
    }
    std::normal_distribution<double> gauss(m.m_cr[k], kParameterSpread);
    return {*F, truncate_crossover_rate(gauss(rng))};
}

void record_success(ParameterMemory& memory, StrategyId strategy, double F, double CR, double delta) {
    if (!(delta >= 0.0)) {
        throw std::invalid_argument("improvement magnitude must be non-negative");
    }
    StrategyMemory& m = memory[strategy];
    m.s_f.push_back(F);
    m.s_cr.push_back(CR);
    m.delta.push_back(delta);
}

std::vector<double> improvement_weights(std::span<const double> delta) {
    const double total = std::accumulate(delta.begin(), delta.end(), 0.0);
    std::vector<double> w(delta.size());
    if (total > 0.0) {
        std::transform(delta.begin(), delta.end(), w.begin(), [total](double d) { return d / total; });
    } else if (!delta.empty()) {
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(delta.size()));
    }
    return w;
}

double weighted_lehmer_mean(std::span<const double> values, std::span<const double> weights) {
    if (values.empty() || values.size() != weights.size()) {
        throw std::invalid_argument("weighted mean needs matching, non-empty inputs");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 0; t < values.size(); ++t) {
        num += weights[t] * values[t] * values[t];
        den += weights[t] * values[t];
    }
    // The exact mean lies in [min, max]; clamp away rounding excursions.
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return std::clamp(num / den, *lo, *hi);
}

double weighted_arithmetic_mean(std::span<const double> values, std::span<const double> weights) {
    if (values.empty() || values.size() != weights.size()) {
        throw std::invalid_argument("weighted mean needs matching, non-empty inputs");
    }
    double s = 0.0;
    for (std::size_t t = 0; t < values.size(); ++t) {
        s += weights[t] * values[t];
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return std::clamp(s, *lo, *hi);
}

void update_memory(ParameterMemory& memory, StrategyId strategy) {
    StrategyMemory& m = memory[strategy];
    const auto w = improvement_weights(m.delta);
    bool changed = false;
    if (!m.s_f.empty()) {
        m.m_f[m.write_pos] = weighted_lehmer_mean(m.s_f, w);
        changed = true;
    }
    if (!m.s_cr.empty()) {
        m.m_cr[m.write_pos] = weighted_arithmetic_mean(m.s_cr, w);
        changed = true;
    }
    if (changed) {
        m.write_pos = (m.write_pos + 1) % memory.history_size();
    }
    m.s_f.clear();
    m.s_cr.clear();
    m.delta.clear();
}

// ---------------------------------------------------------------------------
// Strategy statistics

StrategyStats::StrategyStats(std::size_t window) : window_(window) {
    if (window == 0) {
        throw std::invalid_argument("learning period must be positive");
    }
}

void StrategyStats::record_generation(const std::array<std::size_t, kNumStrategies>& wins) {
    history_.push_back(wins);
    while (history_.size() > window_) {
        history_.pop_front();
    }
}

std::array<std::size_t, kNumStrategies> StrategyStats::windowed_wins() const noexcept {
    std::array<std::size_t, kNumStrategies> total{};
    for (const auto& gen : history_) {
        for (std::size_t j = 0; j < kNumStrategies; ++j) {
            total[j] += gen[j];
        }
    }
    return total;
}

std::array<double, kNumStrategies> StrategyStats::success_rates(std::size_t generation) const noexcept {
    constexpr double third = 1.0 / 3.0;
    std::array<double, kNumStrategies> rates{third, third, third};
    if (generation < window_) {
        return rates;
    }
    const auto nw = windowed_wins();
    const std::size_t total = nw[0] + nw[1] + nw[2];
    if (total == 0) {
        return rates;
    }
    for (std::size_t j = 0; j < kNumStrategies; ++j) {
        rates[j] = static_cast<double>(nw[j]) / static_cast<double>(total);
    }
    return rates;
}

StrategyId select_strategy(const StrategyStats& stats, std::size_t generation, Rng& rng) {
    const auto rates = stats.success_rates(generation);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double u = u01(rng);
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t j = 0; j < kNumStrategies; ++j) {
        if (rates[j] <= 0.0) {
            continue;
        }
        last_positive = j;
        cumulative += rates[j];
        if (u < cumulative) {
            return kAllStrategies[j];
        }
    }
    return kAllStrategies[last_positive];
}

// ---------------------------------------------------------------------------
// Trial generation

std::size_t pbest_pool_size(std::size_t population_size, double p_fraction) noexcept {
    // The small offset keeps exact halves (2.5, 3.5, ...) rounding up despite
    // representation error in p_fraction * n.
    const double scaled = p_fraction * static_cast<double>(population_size);
    const auto rounded = static_cast<std::size_t>(std::floor(scaled + 0.5 + 1e-9));
    return std::clamp<std::size_t>(rounded, 1, std::max<std::size_t>(population_size, 1));
}

Vector repair_bounds(std::span<const double> candidate, std::span<const double> parent,
                     const Problem& problem) {
    const Vector& lo = problem.lower();
    const Vector& hi = problem.upper();
    Vector out(candidate.begin(), candidate.end());
    for (std::size_t j = 0; j < out.size(); ++j) {
        if (out[j] < lo[j]) {
            out[j] = 0.5 * (lo[j] + parent[j]);
        } else if (out[j] > hi[j]) {
            out[j] = 0.5 * (hi[j] + parent[j]);
        }
    }
    return out;
}

Vector binomial_crossover(std::span<const double> target, std::span<const double> donor, double CR,
                          std::size_t forced_index, Rng& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Vector trial(target.begin(), target.end());
    for (std::size_t j = 0; j < trial.size(); ++j) {
        if (j == forced_index || u01(rng) < CR) {
            trial[j] = donor[j];
        }
    }
    return trial;
}

std::vector<std::size_t> distinct_indices(std::size_t n, std::size_t count,
                                          std::span<const std::size_t> exclude, Rng& rng) {
    std::vector<std::size_t> picked;
    picked.reserve(count);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    while (picked.size() < count) {
        const std::size_t r = pick(rng);
        const bool taken = std::find(exclude.begin(), exclude.end(), r) != exclude.end() ||
                           std::find(picked.begin(), picked.end(), r) != picked.end();
        if (!taken) {
            picked.push_back(r);
        }
    }
    return picked;
}

Vector rand_1_donor(std::span<const double> base, std::span<const double> plus,
                    std::span<const double> minus, double F) {
    Vector v(base.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = base[j] + F * (plus[j] - minus[j]);
    }
    return v;
}

Vector current_to_pbest_donor(std::span<const double> current, std::span<const double> pbest,
                              std::span<const double> plus, std::span<const double> minus, double F) {
    Vector v(current.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = current[j] + F * (pbest[j] - current[j]) + F * (plus[j] - minus[j]);
    }
    return v;
}

Vector current_to_rand_donor(std::span<const double> current, std::span<const double> toward,
                             std::span<const double> plus, std::span<const double> minus,
                             double blend, double F) {
    Vector v(current.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = current[j] + blend * (toward[j] - current[j]) + F * (plus[j] - minus[j]);
    }
    return v;
}

namespace {

constexpr std::size_t kMinPopulation = 4;

void require_population(std::span<const Individual> pop, std::size_t target) {
    if (pop.size() < kMinPopulation) {
        throw std::invalid_argument("trial generation needs a population of at least 4");
    }
    if (target >= pop.size()) {
        throw std::out_of_range("target index outside the population");
    }
}

std::size_t draw_forced_index(std::size_t dim, Rng& rng) {
    return std::uniform_int_distribution<std::size_t>(0, dim - 1)(rng);
}

}  // namespace

Vector generate_rand_1_bin(std::span<const Individual> pop, std::size_t target, double F,
                           double CR, const Problem& problem, Rng& rng) {
    require_population(pop, target);
    const std::size_t exclude[] = {target};
    const auto r = distinct_indices(pop.size(), 3, exclude, rng);
    const Vector donor = rand_1_donor(pop[r[0]].x, pop[r[1]].x, pop[r[2]].x, F);
    const Vector& x = pop[target].x;
    const Vector trial = binomial_crossover(x, donor, CR, draw_forced_index(x.size(), rng), rng);
    return repair_bounds(trial, x, problem);
}

Vector generate_current_to_pbest(std::span<const Individual> pop, std::size_t target, double F,
                                 double CR, double p_fraction, std::span<const std::size_t> sf_order,
                                 const Problem& problem, Rng& rng) {
    require_population(pop, target);
    if (sf_order.size() != pop.size()) {
        throw std::invalid_argument("sf_order does not match the population");
    }
    const std::size_t pool = pbest_pool_size(pop.size(), p_fraction);
    const std::size_t pbest = sf_order[std::uniform_int_distribution<std::size_t>(0, pool - 1)(rng)];
    const std::size_t exclude[] = {target};
    const auto r = distinct_indices(pop.size(), 2, exclude, rng);
    const Vector& x = pop[target].x;
    const Vector donor = current_to_pbest_donor(x, pop[pbest].x, pop[r[0]].x, pop[r[1]].x, F);
    const Vector trial = binomial_crossover(x, donor, CR, draw_forced_index(x.size(), rng), rng);
    return repair_bounds(trial, x, problem);
}

Vector generate_current_to_rand(std::span<const Individual> pop, std::size_t target, double F,
                                const Problem& problem, Rng& rng) {
    require_population(pop, target);
    const std::size_t exclude[] = {target};
    const auto r = distinct_indices(pop.size(), 3, exclude, rng);
    const double blend = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const Vector& x = pop[target].x;
    const Vector trial = current_to_rand_donor(x, pop[r[0]].x, pop[r[1]].x, pop[r[2]].x, blend, F);
    return repair_bounds(trial, x, problem);
}

Vector generate_trial(StrategyId strategy, std::span<const Individual> pop, std::size_t target,
                      const ControlParameters& params, double p_fraction,
                      std::span<const std::size_t> sf_order, const Problem& problem, Rng& rng) {
    switch (strategy) {
    case StrategyId::rand_1_bin:
        return generate_rand_1_bin(pop, target, params.F, params.CR, problem, rng);
    case StrategyId::current_to_pbest_1:
        return generate_current_to_pbest(pop, target, params.F, params.CR, p_fraction, sf_order,
                                         problem, rng);
    case StrategyId::current_to_rand_1:
        return generate_current_to_rand(pop, target, params.F, problem, rng);
    }
    throw std::invalid_argument("unknown strategy");
}

}  // namespace ppsde
