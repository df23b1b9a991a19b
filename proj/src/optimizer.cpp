#include "ppsde/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ppsde/comparator.hpp"

namespace ppsde {

std::string_view to_string(Algorithm algorithm) noexcept {
    switch (algorithm) {
    case Algorithm::pps_de:
        return "pps-de";
    case Algorithm::sf_de:
        return "sf-de";
    case Algorithm::eps_de:
        return "eps-de";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view text) {
    for (const Algorithm a : kAllAlgorithms) {
        if (text == to_string(a)) {
            return a;
        }
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(text) +
                                "' (valid: pps-de, sf-de, eps-de)");
}

std::string_view to_string(SelectionRule rule) noexcept {
    switch (rule) {
    case SelectionRule::push:
        return "push";
    case SelectionRule::pull:
        return "pull";
    case SelectionRule::sf:
        return "sf";
    }
    return "unknown";
}

RunConfig RunConfig::defaults_for(std::size_t dim) {
    RunConfig c;
    c.population_size = 5 * dim;
    c.top_size = c.population_size / 2;
    c.max_fes = 20000 * static_cast<std::uint64_t>(dim);
    return c;
}

void RunConfig::validate() const {
    if (top_size < 4 || top_size > population_size) {
        throw std::invalid_argument("top sub-population size must satisfy 4 <= T <= N_P (T=" +
                                    std::to_string(top_size) +
                                    ", N_P=" + std::to_string(population_size) + ")");
    }
    if (max_fes < population_size) {
        throw std::invalid_argument("MaxFES must be at least N_P");
    }
    if (learning_period == 0) {
        throw std::invalid_argument("learning period must be positive");
    }
    if (memory_size == 0) {
        throw std::invalid_argument("memory size must be positive");
    }
    if (!(p_fraction > 0.0 && p_fraction <= 1.0)) {
        throw std::invalid_argument("p fraction must lie in (0, 1]");
    }
    if (!(switch_delta > 0.0)) {
        throw std::invalid_argument("switch delta must be positive");
    }
    if (!(eps_theta >= 0.0 && eps_theta <= 1.0)) {
        throw std::invalid_argument("theta must lie in [0, 1]");
    }
    if (!(epsilon_cutoff() > 0.0)) {
        throw std::invalid_argument("epsilon cutoff generation must be positive");
    }
    if (eps_initial && !(*eps_initial >= 0.0)) {
        throw std::invalid_argument("initial epsilon must be non-negative");
    }
}

double RunConfig::epsilon_cutoff() const noexcept {
    if (eps_cutoff) {
        return *eps_cutoff;
    }
    const double max_gen =
        static_cast<double>(max_fes) / (2.0 * static_cast<double>(population_size));
    return eps_cutoff_fraction * max_gen;
}

Individual best_so_far(std::span<const Individual> population, const Individual* retained) {
    if (population.empty()) {
        if (retained == nullptr) {
            throw std::invalid_argument("best_so_far of an empty population");
        }
        return *retained;
    }
    const Individual* best = &population.front();
    for (const Individual& ind : population.subspan(1)) {
        if (sf_compare(ind, *best) == Comparison::first_better) {
            best = &ind;
        }
    }
    if (retained != nullptr && sf_compare(*best, *retained) != Comparison::first_better) {
        return *retained;
    }
    return *best;
}

namespace {

struct Trial {
    Individual ind;
    StrategyId strategy = StrategyId::rand_1_bin;
    ControlParameters params;
};

Decision decide(SelectionRule rule, const Evaluation& parent, const Evaluation& trial, double eps) {
    switch (rule) {
    case SelectionRule::push:
        return push_decision(parent, trial);
    case SelectionRule::pull:
        return pull_decision(parent, trial, eps);
    case SelectionRule::sf:
        return sf_decision(parent, trial);
    }
    return {};
}

bool strictly_better(SelectionRule rule, const Evaluation& challenger, const Evaluation& incumbent,
                     double eps) {
    return decide(rule, incumbent, challenger, eps).accepted &&
           !decide(rule, challenger, incumbent, eps).accepted;
}

double min_objective(std::span<const Individual> pop) {
    double m = pop.front().eval.f;
    for (const Individual& ind : pop) {
        m = std::min(m, ind.eval.f);
    }
    return m;
}

std::size_t count_feasible(std::span<const Individual> pop) {
    return static_cast<std::size_t>(
        std::count_if(pop.begin(), pop.end(), [](const Individual& ind) { return is_feasible(ind); }));
}

std::vector<double> violations(std::span<const Individual> pop) {
    std::vector<double> phis(pop.size());
    std::transform(pop.begin(), pop.end(), phis.begin(), [](const Individual& ind) { return ind.eval.phi; });
    return phis;
}

Individual make_individual(const Problem& problem, Vector x) {
    Individual ind;
    ind.eval = problem.evaluate(x);
    ind.x = std::move(x);
    return ind;
}

class Engine {
public:
    Engine(const Problem& problem, const RunConfig& config)
        : problem_(problem), config_(config), rng_(config.seed), memory_(config.memory_size),
          stats_(config.learning_period),
          switch_({config.learning_period, config.switch_threshold, config.switch_delta}),
          epsilon_({config.eps_tau, config.eps_alpha, config.eps_cp, config.epsilon_cutoff(),
                    config.eps_theta}) {}

    RunResult run() {
        const auto started = std::chrono::steady_clock::now();
        initialize();
        const std::uint64_t cost = config_.generation_cost();
        std::size_t generation = 0;
        while (fes_ + cost <= config_.max_fes) {
            ++generation;
            step(generation);
        }
        result_.final_fes = fes_;
        result_.best = best_;
        result_.switch_generation = switch_generation_;
        result_.final_population = pop_;
        result_.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        return std::move(result_);
    }

private:
    void initialize() {
        const std::size_t n = config_.population_size;
        pop_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            Vector x(problem_.dim());
            for (std::size_t j = 0; j < x.size(); ++j) {
                x[j] = std::uniform_real_distribution<double>(problem_.lower()[j], problem_.upper()[j])(rng_);
            }
            pop_.push_back(make_individual(problem_, std::move(x)));
        }
        fes_ = n;
        best_ = best_so_far(pop_);

        if (config_.algorithm == Algorithm::eps_de) {
            start_pull(0);
        }
        if (config_.algorithm == Algorithm::pps_de) {
            switch_.update_rate(0, min_objective(pop_));
        }

        const SelectionRule rule = current_rule();
        GenerationRecord rec =
            snapshot(0, rule, rule == SelectionRule::pull ? epsilon_.current() : rule_eps(rule));
        rec.sr = stats_.success_rates(0);
        result_.trace.push_back(rec);
    }

    void start_pull(std::size_t generation) {
        const double eps0 = config_.eps_initial ? *config_.eps_initial
                                                : initial_epsilon(violations(pop_), config_.eps_theta);
        epsilon_.start(eps0);
        switch_generation_ = generation;
    }

    SelectionRule current_rule() const {
        switch (config_.algorithm) {
        case Algorithm::sf_de:
            return SelectionRule::sf;
        case Algorithm::eps_de:
            return SelectionRule::pull;
        case Algorithm::pps_de:
            return switch_.phase() == Phase::push ? SelectionRule::push : SelectionRule::pull;
        }
        return SelectionRule::sf;
    }

    static double rule_eps(SelectionRule rule) {
        return rule == SelectionRule::push ? kPushEpsilon : 0.0;
    }

    void step(std::size_t generation) {
        const SelectionRule rule = current_rule();
        double eps = rule_eps(rule);
        if (rule == SelectionRule::pull) {
            const double ratio =
                static_cast<double>(count_feasible(pop_)) / static_cast<double>(pop_.size());
            eps = epsilon_.level(generation - *switch_generation_, ratio);
        }

        // Sort best-first so the top sub-population is the prefix [0, T).
        const auto order = sort_sf(pop_);
        Population sorted;
        sorted.reserve(pop_.size());
        for (const std::size_t idx : order) {
            sorted.push_back(std::move(pop_[idx]));
        }
        pop_ = std::move(sorted);
        std::vector<std::size_t> sf_order(pop_.size());
        std::iota(sf_order.begin(), sf_order.end(), std::size_t{0});

        const std::size_t n = config_.population_size;
        const std::size_t top = config_.top_size;
        std::vector<Trial> trials(n);

        std::array<std::size_t, kNumStrategies> wins{};
        for (std::size_t i = 0; i < top; ++i) {
            std::array<Trial, kNumStrategies> candidates;
            for (const StrategyId s : kAllStrategies) {
                candidates[index_of(s)] = make_trial(s, i, sf_order);
            }
            std::size_t winner = 0;
            for (std::size_t s = 1; s < kNumStrategies; ++s) {
                if (strictly_better(rule, candidates[s].ind.eval, candidates[winner].ind.eval, eps)) {
                    winner = s;
                }
            }
            if (config_.hooks.forced_top_winner) {
                winner = index_of(*config_.hooks.forced_top_winner);
            }
            ++wins[winner];
            trials[i] = std::move(candidates[winner]);
        }
        fes_ += 3 * top;
        stats_.record_generation(wins);

        std::array<std::size_t, kNumStrategies> picks{};
        for (std::size_t i = top; i < n; ++i) {
            const StrategyId s = select_strategy(stats_, generation, rng_);
            ++picks[index_of(s)];
            trials[i] = make_trial(s, i, sf_order);
        }
        fes_ += n - top;

        for (std::size_t i = 0; i < n; ++i) {
            const Evaluation& parent = pop_[i].eval;
            const Evaluation& child = trials[i].ind.eval;
            const Decision d = decide(rule, parent, child, eps);
            if (!d.accepted) {
                continue;
            }
            const double delta = d.basis == DecisionBasis::objective ? std::abs(parent.f - child.f)
                                                                     : std::abs(parent.phi - child.phi);
            record_success(memory_, trials[i].strategy, trials[i].params.F, trials[i].params.CR, delta);
            pop_[i] = std::move(trials[i].ind);
        }
        for (const StrategyId s : kAllStrategies) {
            update_memory(memory_, s);
        }

        best_ = best_so_far(pop_, &best_);

        if (config_.algorithm == Algorithm::pps_de) {
            switch_.update_rate(generation, min_objective(pop_));
            if (switch_.should_switch()) {
                start_pull(generation);
            }
        }

        GenerationRecord rec = snapshot(generation, rule, eps);
        rec.sr = stats_.success_rates(generation);
        rec.top_wins = wins;
        rec.bottom_picks = picks;
        result_.trace.push_back(rec);
    }

    Trial make_trial(StrategyId s, std::size_t target, std::span<const std::size_t> sf_order) {
        Trial t;
        t.strategy = s;
        t.params = sample_parameters(memory_, s, rng_);
        Vector x = generate_trial(s, pop_, target, t.params, config_.p_fraction, sf_order, problem_, rng_);
        t.ind = make_individual(problem_, std::move(x));
        return t;
    }

    GenerationRecord snapshot(std::size_t generation, SelectionRule rule, double eps) const {
        GenerationRecord rec;
        rec.generation = generation;
        rec.fes = fes_;
        rec.best_f = best_.eval.f;
        rec.best_phi = best_.eval.phi;
        rec.rule = rule;
        rec.eps = eps;
        rec.population_min_f = min_objective(pop_);
        rec.feasible_count = count_feasible(pop_);
        return rec;
    }

    const Problem& problem_;
    const RunConfig& config_;
    Rng rng_;
    ParameterMemory memory_;
    StrategyStats stats_;
    SwitchState switch_;
    EpsilonState epsilon_;
    std::optional<std::size_t> switch_generation_;

    Population pop_;
    Individual best_;
    std::uint64_t fes_ = 0;
    RunResult result_;
};

}  // namespace

RunResult run_ppsde(const Problem& problem, RunConfig config) {
    config.algorithm = Algorithm::pps_de;
    config.validate();
    return Engine(problem, config).run();
}

RunResult run_baseline(const Problem& problem, const RunConfig& config) {
    if (config.algorithm == Algorithm::pps_de) {
        throw std::invalid_argument("run_baseline expects sf-de or eps-de");
    }
    config.validate();
    return Engine(problem, config).run();
}

RunResult run(const Problem& problem, const RunConfig& config) {
    return config.algorithm == Algorithm::pps_de ? run_ppsde(problem, config)
                                                 : run_baseline(problem, config);
}

}  // namespace ppsde
