#include "ppsde/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppsde/stats.hpp"

namespace ppsde {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kSignificance = 0.05;

template <typename T>
void apply(const std::optional<T>& value, T& target) {
    if (value) {
        target = *value;
    }
}

}  // namespace

RunConfig ExperimentSpec::config_for(std::size_t dim, Algorithm algorithm, std::size_t run_index) const {
    RunConfig c = RunConfig::defaults_for(dim);
    const RunOverrides& o = overrides;
    apply(o.population_size, c.population_size);
    if (o.population_size && !o.top_size) {
        c.top_size = c.population_size / 2;
    }
    apply(o.top_size, c.top_size);
    apply(o.max_fes, c.max_fes);
    apply(o.learning_period, c.learning_period);
    apply(o.p_fraction, c.p_fraction);
    apply(o.memory_size, c.memory_size);
    apply(o.switch_threshold, c.switch_threshold);
    apply(o.switch_delta, c.switch_delta);
    apply(o.eps_tau, c.eps_tau);
    apply(o.eps_alpha, c.eps_alpha);
    apply(o.eps_cp, c.eps_cp);
    apply(o.eps_cutoff_fraction, c.eps_cutoff_fraction);
    apply(o.eps_theta, c.eps_theta);
    c.algorithm = algorithm;
    c.seed = base_seed + run_index;
    return c;
}

Problem ExperimentSpec::problem_for(const std::string& id, std::size_t dim) const {
    return make_suite_problem(id, dim, overrides.sigma.value_or(kDefaultEqualityTolerance));
}

// ---------------------------------------------------------------------------
// Argument parsing

ExperimentSpec parse_args(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return parse_args(static_cast<int>(argv.size()), argv.data());
}

ExperimentSpec parse_args(int argc, const char* const* argv) {
    CLI::App app{"Push-and-pull search differential evolution benchmark runner", "ppsde"};
    app.require_subcommand(1);
    // The config file belongs to the root app so its [run] section reaches the
    // subcommand; fallthrough lets it be given after "run".
    app.set_config("--config", "", "Key-value (TOML/INI) file; options go in a [run] section");
    CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment over problems, algorithms and seeds");
    run_cmd->fallthrough();
    run_cmd->footer("Option defaults may come from --config FILE (TOML/INI, keys in a [run] section,\n"
                    "e.g. max-fes = 5000); command-line flags take precedence.");

    ExperimentSpec spec;
    std::vector<std::string> problems;
    std::vector<std::string> algos;
    RunOverrides& o = spec.overrides;
    std::string out_dir = spec.out_dir.string();

    run_cmd->add_option("--problem", problems, "Problem id(s): P1..P5 or full names")->required();
    run_cmd->add_option("--dim", spec.dims, "Dimension(s)")->check(CLI::Range(2, 100000));
    run_cmd->add_option("--algo", algos, "Algorithm(s): pps-de, sf-de, eps-de");
    run_cmd->add_option("--runs", spec.runs, "Independent runs per cell")->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", spec.base_seed, "Base seed; run i uses seed + i");
    run_cmd->add_option("--max-fes", o.max_fes, "Function evaluation budget (default 20000*D)");
    run_cmd->add_option("--pop", o.population_size, "Population size (default 5*D)");
    run_cmd->add_option("--top", o.top_size, "Top sub-population size (default pop/2)");
    run_cmd->add_option("--out", out_dir, "Output directory");
    run_cmd->add_option("--threads", spec.threads, "Worker threads (0: all cores)");
    run_cmd->add_option("--learning-period", o.learning_period, "Learning period L in generations");
    run_cmd->add_option("--p-fraction", o.p_fraction, "pbest pool fraction");
    run_cmd->add_option("--memory-size", o.memory_size, "Parameter memory length H");
    run_cmd->add_option("--sigma", o.sigma, "Equality constraint tolerance");
    run_cmd->add_option("--switch-threshold", o.switch_threshold, "Push-to-pull threshold on r_G");
    run_cmd->add_option("--switch-delta", o.switch_delta, "Denominator floor of r_G");
    run_cmd->add_option("--eps-tau", o.eps_tau, "Epsilon shrink rate");
    run_cmd->add_option("--eps-alpha", o.eps_alpha, "Feasible ratio that stops the shrink branch");
    run_cmd->add_option("--eps-cp", o.eps_cp, "Epsilon decay exponent");
    run_cmd->add_option("--eps-cutoff-fraction", o.eps_cutoff_fraction,
                        "Tc as a fraction of MaxFES / (2 N_P)");
    run_cmd->add_option("--eps-theta", o.eps_theta, "Percentile for the initial epsilon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    try {
        for (const auto& p : problems) {
            spec.problems.emplace_back(to_string(parse_suite_id(p)));
        }
        if (!algos.empty()) {
            spec.algorithms.clear();
            for (const auto& a : algos) {
                spec.algorithms.push_back(parse_algorithm(a));
            }
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (spec.dims.empty()) {
        throw UsageError("--dim needs at least one value");
    }
    spec.out_dir = out_dir;

    // Surface config errors now rather than inside a worker.
    for (const std::size_t d : spec.dims) {
        for (const Algorithm a : spec.algorithms) {
            try {
                spec.config_for(d, a, 0).validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(std::string(e.what()) + " (D=" + std::to_string(d) + ")");
            }
        }
    }
    if (o.sigma && !(*o.sigma >= 0.0)) {
        throw UsageError("--sigma must be non-negative");
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Output

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_trace_csv(const RunResult& result, std::ostream& out) {
    out << kTraceHeader << '\n';
    for (const GenerationRecord& r : result.trace) {
        out << r.generation << ',' << r.fes << ',' << format_double(r.best_f) << ','
            << format_double(r.best_phi) << ',' << to_string(r.rule) << ',' << format_double(r.eps);
        for (const double sr : r.sr) {
            out << ',' << format_double(sr);
        }
        out << '\n';
    }
}

std::string trace_file_name(const std::string& problem, std::size_t dim, Algorithm algorithm,
                            std::size_t run_index) {
    std::ostringstream os;
    os << problem << "_D" << dim << '_' << to_string(algorithm) << "_run" << run_index << ".csv";
    return os.str();
}

namespace {

struct Task {
    std::size_t row = 0;  // index into (problem, dim) rows
    std::size_t algo = 0;
    std::size_t run = 0;
};

struct Row {
    std::string problem;
    std::size_t dim = 0;
    std::string label() const { return problem + "/D" + std::to_string(dim); }
};

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

ordered_json cell_json(const Row& row, Algorithm algo, const CellRuns& cell, std::uint64_t base_seed) {
    ordered_json j;
    j["problem"] = row.problem;
    j["dim"] = row.dim;
    j["algorithm"] = std::string(to_string(algo));
    j["runs"] = cell.runs();
    j["seeds"] = {base_seed, base_seed + cell.runs() - 1};
    const std::size_t feasible = cell.feasible_runs();
    j["feasible_runs"] = feasible;
    j["feasibility_rate"] = static_cast<double>(feasible) / static_cast<double>(cell.runs());
    const auto values = cell.feasible_values();
    if (!values.empty()) {
        const Summary s = summarize(values);
        j["mean"] = s.mean;
        j["std"] = s.std;
        j["best"] = s.best;
        j["worst"] = s.worst;
        j["median"] = s.median;
    } else {
        j["mean"] = nullptr;
        j["std"] = nullptr;
        j["best"] = nullptr;
        j["worst"] = nullptr;
        j["median"] = nullptr;
    }
    j["mean_phi"] = summarize(cell.best_phi).mean;
    j["ranked_on"] = ranking_value(cell).from_violation ? "violation" : "objective";
    return j;
}

}  // namespace

int execute(const ExperimentSpec& spec, std::ostream& log) {
    std::vector<Row> rows;
    for (const auto& p : spec.problems) {
        for (const std::size_t d : spec.dims) {
            rows.push_back({p, d});
        }
    }
    std::vector<Task> tasks;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
            for (std::size_t run = 0; run < spec.runs; ++run) {
                tasks.push_back({r, a, run});
            }
        }
    }

    const std::filesystem::path trace_dir = spec.out_dir / "traces";
    try {
        std::filesystem::create_directories(trace_dir);
    } catch (const std::filesystem::filesystem_error& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }

    std::vector<std::optional<RunResult>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::string first_error;

    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) {
                return;
            }
            const Task& task = tasks[t];
            const Row& row = rows[task.row];
            const Algorithm algo = spec.algorithms[task.algo];
            try {
                const Problem problem = spec.problem_for(row.problem, row.dim);
                RunResult result = run(problem, spec.config_for(row.dim, algo, task.run));
                std::ostringstream csv;
                write_trace_csv(result, csv);
                write_text(trace_dir / trace_file_name(row.problem, row.dim, algo, task.run), csv.str());
                result.trace.clear();
                result.final_population.clear();
                results[t] = std::move(result);
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                if (!failed.exchange(true)) {
                    first_error = row.label() + " " + std::string(to_string(algo)) + " run " +
                                  std::to_string(task.run) + " (seed " +
                                  std::to_string(spec.base_seed + task.run) + "): " + e.what();
                }
            }
        }
    };

    std::size_t n_threads = spec.threads != 0 ? spec.threads : std::thread::hardware_concurrency();
    n_threads = std::clamp<std::size_t>(n_threads, 1, std::max<std::size_t>(tasks.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failed) {
        log << "error: " << first_error << '\n';
        return 1;
    }

    std::vector<std::string> row_labels;
    for (const Row& r : rows) {
        row_labels.push_back(r.label());
    }
    std::vector<std::string> algo_names;
    for (const Algorithm a : spec.algorithms) {
        algo_names.emplace_back(to_string(a));
    }
    RunTable table(row_labels, algo_names);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        CellRuns& cell = table.cell(tasks[t].row, tasks[t].algo);
        cell.best_f.push_back(results[t]->best.eval.f);
        cell.best_phi.push_back(results[t]->best.eval.phi);
    }
    table.validate();

    ordered_json summary;
    summary["runs_per_cell"] = spec.runs;
    summary["base_seed"] = spec.base_seed;
    summary["cells"] = ordered_json::array();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
            summary["cells"].push_back(cell_json(rows[r], spec.algorithms[a], table.cell(r, a), spec.base_seed));
        }
    }

    const bool rank = spec.algorithms.size() >= 2 && rows.size() >= 2;
    try {
        if (rank) {
            const Matrix means = table.ranking_matrix();
            const FriedmanResult fr = friedman_aligned(means);
            ordered_json report;
            report["test"] = "friedman-aligned-ranks";
            report["problems"] = row_labels;
            report["algorithms"] = algo_names;
            report["cell_means"] = means;
            ordered_json on_violation = ordered_json::array();
            for (std::size_t r = 0; r < rows.size(); ++r) {
                ordered_json flags = ordered_json::array();
                for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
                    flags.push_back(ranking_value(table.cell(r, a)).from_violation);
                }
                on_violation.push_back(flags);
            }
            report["ranked_on_violation"] = on_violation;
            report["average_ranks"] = ordered_json::object();
            for (std::size_t a = 0; a < algo_names.size(); ++a) {
                report["average_ranks"][algo_names[a]] = fr.average_ranks[a];
            }
            report["statistic"] = fr.statistic;
            report["degrees_of_freedom"] = fr.degrees_of_freedom;
            report["p_value"] = fr.p_value;
            report["significance_level"] = kSignificance;
            report["significant"] = fr.p_value < kSignificance;
            write_text(spec.out_dir / "friedman.json", report.dump(2) + "\n");
            summary["friedman"] = "friedman.json";
        } else {
            summary["friedman"] = nullptr;
            summary["friedman_note"] = "omitted: the aligned Friedman test needs at least 2 algorithms and 2 problems";
            log << "note: friedman report omitted (needs >= 2 algorithms and >= 2 problems)\n";
        }
        write_text(spec.out_dir / "summary.json", summary.dump(2) + "\n");
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }

    log << "wrote " << tasks.size() << " traces, summary.json" << (rank ? ", friedman.json" : "")
        << " to " << spec.out_dir.string() << '\n';
    return 0;
}

}  // namespace ppsde
