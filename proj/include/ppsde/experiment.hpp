#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppsde/optimizer.hpp"

namespace ppsde {

/// Bad command line or config file.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// --help was given; what() holds the help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// RunConfig fields the user may override; unset fields keep the
/// per-dimension defaults.
struct RunOverrides {
    std::optional<std::size_t> population_size;
    std::optional<std::size_t> top_size;
    std::optional<std::uint64_t> max_fes;
    std::optional<std::size_t> learning_period;
    std::optional<double> p_fraction;
    std::optional<std::size_t> memory_size;
    std::optional<double> sigma;
    std::optional<double> switch_threshold;
    std::optional<double> switch_delta;
    std::optional<double> eps_tau;
    std::optional<double> eps_alpha;
    std::optional<double> eps_cp;
    std::optional<double> eps_cutoff_fraction;
    std::optional<double> eps_theta;
};

struct ExperimentSpec {
    std::vector<std::string> problems;  // canonical suite names
    std::vector<std::size_t> dims{10};
    std::vector<Algorithm> algorithms{Algorithm::pps_de};
    std::size_t runs = 25;
    std::uint64_t base_seed = 1;
    RunOverrides overrides;
    std::filesystem::path out_dir = "results";
    std::size_t threads = 0;  // 0: hardware concurrency

    /// Seed of run `run_index` is base_seed + run_index.
    RunConfig config_for(std::size_t dim, Algorithm algorithm, std::size_t run_index) const;
    Problem problem_for(const std::string& id, std::size_t dim) const;
};

/// Parses `ppsde run ...`. argv[0] is the program name.
ExperimentSpec parse_args(int argc, const char* const* argv);
ExperimentSpec parse_args(const std::vector<std::string>& args);

/// Runs every (problem, dim, algorithm, seed) cell and writes traces, the
/// summary and, when possible, the aligned Friedman report. Returns the
/// process exit code.
int execute(const ExperimentSpec& spec, std::ostream& log);

// Output helpers, exposed for tests.

inline constexpr const char* kTraceHeader = "generation,fes,best_f,best_phi,phase,eps_k,sr1,sr2,sr3";

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

void write_trace_csv(const RunResult& result, std::ostream& out);

std::string trace_file_name(const std::string& problem, std::size_t dim, Algorithm algorithm,
                            std::size_t run_index);

}  // namespace ppsde
