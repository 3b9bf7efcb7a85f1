#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rns/prob.hpp"
#include "rns/random.hpp"
#include "rns/solver.hpp"

namespace rns::cli {

inline constexpr const char* kToolName = "rnslab";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kOutputDirEnv = "RNSLAB_OUTPUT_DIR";

enum ExitCode : int {
    kExitOk = 0,
    kExitOther = 1,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitInvariant = 4,
};

/// Maps a library error onto the process exit code.
int exit_code_for(ErrorCode code) noexcept;

const std::vector<std::string>& subcommands();

/// Everything a run needs. Field defaults are the documented defaults.
struct RunConfig {
    std::string subcommand;
    std::filesystem::path output_dir;  ///< empty: $RNSLAB_OUTPUT_DIR, then ./rnslab-out

    int grid_size = 16;
    double alpha = 0.5;
    std::uint64_t seed = 1;
    unsigned threads = 0;

    DataFamily family{FamilyKind::power_law, 2.0, 1.0, 1.0};
    std::uint64_t phase_seed = 0;

    std::vector<double> heat_p{3.0}, heat_q{4.0}, heat_T{1.0};
    int heat_nodes = 33;

    std::vector<double> jt_alpha{0.1, 0.2, 0.3, 0.4, 0.5}, jt_p{3.0, 4.0}, jt_T{0.01, 0.1, 1.0};

    std::size_t samples = 10000;
    int time_nodes = 17;
    double tail_p = 3.0, tail_q = 4.0, tail_T = 1.0;
    std::vector<double> tail_lambdas{0.18, 0.21, 0.24, 0.27, 0.30, 0.33, 0.36, 0.39};
    std::vector<double> moment_r{2.0, 3.0, 4.0, 6.0, 8.0};
    CoverageConfig coverage;

    double N = 4.0;
    double dt = 1e-3;
    double T = 0.25;
    int snapshot_every = 0;
    double picard_t1 = 1e-3;
    int picard_iters = 5;
    int picard_intervals = 32;
    double restart_tau = 0.05;
    double restart_duration = 0.1;
    double restart_dt = 1e-4;
    int energy_levels = 3;

    GridSpec grid() const { return GridSpec(grid_size); }
    EnsembleConfig ensemble() const;
    /// Base data f from the family, before randomization.
    GeneratedData base_data() const;
    /// Solver configuration with the randomized data f^w.
    SolverConfig solver() const;
    std::filesystem::path resolved_output_dir() const;
};

using Entries = std::vector<std::pair<std::string, std::string>>;

/// Configuration grammar, one statement per line:
///   # comment            (also ';'; everything after '#' is dropped)
///   [section]            prefixes following keys with "section."
///   key = value          dotted keys are allowed anywhere
/// Lists are comma separated. Duplicate keys are a ParseError, unknown keys
/// a ValidationError naming the key.
Entries parse_entries(const std::string& text);
RunConfig build_config(const Entries& entries);
RunConfig parse_config(const std::string& text);

/// Canonical key = value text that parses back to the same RunConfig.
std::string to_config_text(const RunConfig& cfg);
/// Documented key list with defaults, one "key = default" per line.
std::string describe_keys();

/// Runs one subcommand; outputs go to <output_dir>/<subcommand>/ next to a
/// manifest. Errors are reported to `log` and mapped to exit codes.
int dispatch(const std::string& subcommand, const RunConfig& cfg, std::ostream& log);

struct InvariantResult {
    std::string name;
    std::string anchor;  ///< the property or identity being checked
    bool pass;
    double value;
    double limit;
    std::string detail;
};

/// Invariant suite behind `verify`. Fixed small problems, deterministic.
std::vector<InvariantResult> run_invariant_suite(unsigned threads);

}  // namespace rns::cli
