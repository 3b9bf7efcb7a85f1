// rnslab: command-line driver for the randomized Navier-Stokes experiments.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rns/cli.hpp"
#include "rns/error.hpp"

namespace {

const char* describe(const std::string& sub) {
    if (sub == "gen") return "generate data f and its randomization f^w";
    if (sub == "heat-norms") return "space-time norms of the heat flow of f^w";
    if (sub == "jt-table") return "tabulate K, sigma and J(T)";
    if (sub == "mc-tail") return "Monte Carlo tail of the space-time norm";
    if (sub == "mc-moments") return "Monte Carlo moment growth of Gaussian sums";
    if (sub == "coverage") return "coverage of the dyadic event ladders";
    if (sub == "solve") return "integrate the truncated system for v";
    if (sub == "restart") return "solve to tau, then continue the full system from u(tau)";
    if (sub == "energy-report") return "energy identity residual under dt halving";
    return "run the invariant suite";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rns::Error(rns::ErrorCode::IoError, "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    using namespace rns::cli;
    CLI::App app{"rnslab: randomized-data Navier-Stokes experiments"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path, out_dir;
    std::vector<std::string> overrides;
    int threads = -1;
    bool print_defaults = false;
    app.add_option("-c,--config", config_path, "configuration file (key = value, [section] headers)");
    app.add_option("-s,--set", overrides, "override one key, e.g. --set solver.dt=5e-4")->allow_extra_args(false);
    app.add_option("-o,--out", out_dir, std::string("output directory (default: $") + kOutputDirEnv + " or ./rnslab-out)");
    app.add_option("-j,--threads", threads, "worker threads for ensembles (0: all cores)")->check(CLI::NonNegativeNumber);
    app.add_flag("--print-defaults", print_defaults, "print every configuration key with its default and exit");
    for (const auto& sub : subcommands()) app.add_subcommand(sub, describe(sub));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (print_defaults) {
        std::cout << describe_keys();
        return kExitOk;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return kExitConfig;
    }
    const std::string sub = app.get_subcommands().front()->get_name();

    RunConfig cfg;
    try {
        Entries entries;
        if (!config_path.empty()) entries = parse_entries(read_file(config_path));
        for (const auto& o : overrides) {
            const auto extra = parse_entries(o);
            if (extra.size() != 1) throw rns::Error(rns::ErrorCode::ParseError, "--set expects key=value, got '" + o + "'");
            bool replaced = false;
            for (auto& e : entries)
                if (e.first == extra[0].first) {
                    e.second = extra[0].second;
                    replaced = true;
                }
            if (!replaced) entries.push_back(extra[0]);
        }
        cfg = build_config(entries);
    } catch (const rns::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return e.code() == rns::ErrorCode::IoError ? kExitOther : kExitConfig;
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (threads >= 0) cfg.threads = static_cast<unsigned>(threads);
    cfg.subcommand = sub;
    return dispatch(sub, cfg, std::cout);
}
