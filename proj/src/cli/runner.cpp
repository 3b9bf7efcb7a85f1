#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "rns/cli.hpp"
#include "rns/error.hpp"
#include "rns/heat.hpp"
#include "rns/norms.hpp"
#include "rns/snapshot.hpp"

namespace rns::cli {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::ValidationError:
        case ErrorCode::InvalidFamily:
        case ErrorCode::DomainError:
        case ErrorCode::InsufficientSamples:
        case ErrorCode::FrequencyOverflow:
            return kExitConfig;
        case ErrorCode::IoError:
            return kExitOther;
        default:
            return is_numerical_failure(code) ? kExitNumerical : kExitOther;
    }
}

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {"gen",      "heat-norms", "jt-table", "mc-tail",       "mc-moments",
                                                   "coverage", "solve",      "restart",  "energy-report", "verify"};
    return names;
}

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

// One run directory: collects output names and writes the manifest last.
class Run {
public:
    Run(const std::string& sub, const RunConfig& cfg) : dir_(cfg.resolved_output_dir() / sub) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir_.string() + ": " + ec.message());
        manifest.set("tool.name", kToolName);
        manifest.set("tool.version", kToolVersion);
        manifest.set("run.subcommand", sub);
        manifest.set("run.timestamp", utc_timestamp());
        manifest.set("run.config", "config.ini");
        text("config.ini", to_config_text(cfg), false);
    }

    template <class Writer>
    void file(const std::string& name, Writer&& write) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw Error(ErrorCode::IoError, "cannot open " + (dir_ / name).string());
        write(out);
        if (!out) throw Error(ErrorCode::IoError, "write failed for " + (dir_ / name).string());
        outputs_.push_back(name);
    }

    void text(const std::string& name, const std::string& body, bool listed = true) {
        file(name, [&](std::ostream& o) { o << body; });
        if (!listed) outputs_.pop_back();
    }

    void snapshot(const std::string& name, const SpectralField& F) {
        write_snapshot(dir_ / name, F);
        outputs_.push_back(name);
    }

    void plot(const std::string& name, ordered_json desc) {
        text(name, desc.dump(2) + "\n");
    }

    void finish(const std::string& status, int code) {
        std::string list;
        for (std::size_t i = 0; i < outputs_.size(); ++i) list += (i ? "," : "") + outputs_[i];
        manifest.set("run.outputs", list);
        manifest.set("run.status", status);
        manifest.set("run.exit_code", code);
        manifest.write(dir_ / "manifest.txt");
    }

    const fs::path& dir() const { return dir_; }
    Manifest manifest;

private:
    fs::path dir_;
    std::vector<std::string> outputs_;
};

ordered_json line_plot(const std::string& title, const std::string& data, const std::string& x,
                       std::vector<std::string> ys, const std::string& xscale = "linear",
                       const std::string& yscale = "linear") {
    ordered_json d;
    d["title"] = title;
    d["data"] = data;
    d["kind"] = "line";
    d["x"] = {{"column", x}, {"scale", xscale}};
    d["y"] = ordered_json::array();
    for (const auto& y : ys) d["y"].push_back({{"column", y}, {"scale", yscale}});
    return d;
}

void record_config(Manifest& m, const RunConfig& cfg) {
    std::istringstream in(to_config_text(cfg));
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        m.set("config." + line.substr(0, eq), line.substr(eq + 3));
    }
}

void warn_family(const GeneratedData& d, std::ostream& log, Manifest& m) {
    if (d.warning.empty()) return;
    log << "warning: " << d.warning << "\n";
    m.set("data.warning", d.warning);
}

std::string summary_csv(const std::vector<std::pair<std::string, double>>& rows) {
    std::string s = "quantity,value\n";
    for (const auto& [k, v] : rows) s += k + "," + format_double(v) + "\n";
    return s;
}

int run_gen(const RunConfig& cfg, Run& run, std::ostream& log) {
    const GridSpec g = cfg.grid();
    const GeneratedData base = cfg.base_data();
    warn_family(base, log, run.manifest);
    const RandomDraw draw = draw_gaussians(g, cfg.seed);
    const SpectralField fw = randomize_field(base.field, draw);
    record_randomization(run.manifest, g, cfg.family, cfg.alpha, cfg.seed);
    run.snapshot("data.rns1", base.field);
    run.snapshot("randomized.rns1", fw);
    run.text("summary.csv", summary_csv({{"negative_norm_f", base.negative_norm},
                                         {"negative_norm_fw", sobolev_norm(fw, -cfg.alpha)},
                                         {"l2_norm_fw", fw.norm()},
                                         {"pairs", double(draw.values.size())}}));
    log << "gen: ||f||=" << base.negative_norm << " ||f^w||=" << sobolev_norm(fw, -cfg.alpha) << "\n";
    return kExitOk;
}

int run_heat_norms(const RunConfig& cfg, Run& run, std::ostream& log) {
    const GridSpec g = cfg.grid();
    const GeneratedData base = cfg.base_data();
    warn_family(base, log, run.manifest);
    const SpectralField fw = randomize_field(base.field, draw_gaussians(g, cfg.seed));
    record_randomization(run.manifest, g, cfg.family, cfg.alpha, cfg.seed);
    std::vector<NormRow> rows;
    for (double T : cfg.heat_T)
        for (double p : cfg.heat_p)
            for (double q : cfg.heat_q)
                rows.push_back({cfg.alpha, p, q, T, cfg.seed,
                                heat_lplq(fw, p, q, TimeGrid::log_spaced(T, cfg.heat_nodes))});
    run.file("norms.csv", [&](std::ostream& o) { write_norm_table(o, rows); });
    run.plot("norms.plot.json", line_plot("heat-flow space-time norms", "norms.csv", "T", {"value"}, "log", "log"));
    log << "heat-norms: " << rows.size() << " rows\n";
    return kExitOk;
}

int run_jt_table(const RunConfig& cfg, Run& run, std::ostream& log) {
    std::vector<JKRow> rows;
    for (double a : cfg.jt_alpha)
        for (double p : cfg.jt_p) {
            const double K = compute_K(a, p);
            const double sigma = sigma_exponent(p, a);
            for (double T : cfg.jt_T) rows.push_back({a, p, T, compute_J(T, a, p), K, sigma});
        }
    run.file("jt.csv", [&](std::ostream& o) { write_jk_table(o, rows); });
    run.plot("jt.plot.json", line_plot("J(T)", "jt.csv", "T", {"J"}, "log", "log"));
    log << "jt-table: " << rows.size() << " rows\n";
    return kExitOk;
}

int run_mc_tail(const RunConfig& cfg, Run& run, std::ostream& log) {
    const GeneratedData base = cfg.base_data();
    warn_family(base, log, run.manifest);
    const EnsembleConfig e = cfg.ensemble();
    record_randomization(run.manifest, cfg.grid(), cfg.family, cfg.alpha, cfg.seed);
    run.manifest.set("ensemble.samples", static_cast<std::uint64_t>(e.samples));
    const TailReport rep = run_tail_experiment(base.field, cfg.tail_p, cfg.tail_q, cfg.tail_T, cfg.tail_lambdas, e);
    run.file("tail.csv", [&](std::ostream& o) { write_tail_csv(o, rep.rows); });
    run.text("tail_fit.csv", summary_csv({{"beta", rep.fit.beta},
                                          {"intercept", rep.fit.intercept},
                                          {"r_squared", rep.fit.r_squared},
                                          {"points", double(rep.fit.points)},
                                          {"f_norm", rep.f_norm},
                                          {"time_nodes", double(rep.grid.nodes.size())}}));
    auto plot = line_plot("exceedance frequency", "tail.csv", "lambda", {"freq"}, "linear", "log");
    plot["band"] = {{"lo", "ci_lo"}, {"hi", "ci_hi"}};
    run.plot("tail.plot.json", plot);
    log << "mc-tail: beta=" << rep.fit.beta << " R^2=" << rep.fit.r_squared << "\n";
    return kExitOk;
}

// Coefficients of the pairing functional sum_k c_k h_k whose l^2 norm is ||f||_{H^-alpha}.
std::vector<double> functional_weights(const SpectralField& f, double alpha) {
    const auto pairs = PairIndex::of(f.grid());
    const auto& table = f.grid().table();
    std::vector<double> c(pairs->pairs());
    for (std::size_t k = 0; k < c.size(); ++k) {
        const std::size_t s = pairs->representative[k];
        double m2 = 0.0;
        for (int comp = 0; comp < 3; ++comp) m2 += std::norm(f.at(comp, s));
        c[k] = std::sqrt(2.0 * m2) * std::pow(table.k2[s], -0.5 * alpha);
    }
    return c;
}

int run_mc_moments(const RunConfig& cfg, Run& run, std::ostream& log) {
    const GeneratedData base = cfg.base_data();
    warn_family(base, log, run.manifest);
    record_randomization(run.manifest, cfg.grid(), cfg.family, cfg.alpha, cfg.seed);
    run.manifest.set("ensemble.samples", static_cast<std::uint64_t>(cfg.samples));
    const auto c = functional_weights(base.field, cfg.alpha);
    const auto rows = run_moment_experiment(c, cfg.moment_r, cfg.ensemble());
    run.file("moments.csv", [&](std::ostream& o) { write_moment_csv(o, rows); });
    run.plot("moments.plot.json", line_plot("moment growth", "moments.csv", "r", {"estimate", "oracle"}));
    bool all = true;
    for (const auto& r : rows) all = all && r.within_bound;
    log << "mc-moments: " << rows.size() << " rows, bound " << (all ? "holds" : "violated") << "\n";
    return kExitOk;
}

int run_coverage(const RunConfig& cfg, Run& run, std::ostream& log) {
    const GeneratedData base = cfg.base_data();
    warn_family(base, log, run.manifest);
    record_randomization(run.manifest, cfg.grid(), cfg.family, cfg.alpha, cfg.seed);
    run.manifest.set("ensemble.samples", static_cast<std::uint64_t>(cfg.samples));
    const CoverageReport rep = coverage_study(base.field, cfg.coverage, cfg.ensemble());
    run.file("coverage.csv", [&](std::ostream& o) { write_coverage_csv(o, rep.rows); });
    auto plot = line_plot("coverage of the dyadic unions", "coverage.csv", "J", {"fraction"});
    plot["group_by"] = "ladder";
    run.plot("coverage.plot.json", plot);
    log << "coverage: joint fraction at J=" << cfg.coverage.max_rung << " is " << rep.rows.back().fraction << "\n";
    return kExitOk;
}

void emit_solve(Run& run, const SolveResult& r, const std::string& prefix) {
    run.file(prefix + "ledger.csv", [&](std::ostream& o) { write_ledger_csv(o, r.ledger); });
    for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
        std::ostringstream name;
        name << prefix << "snap_" << std::setw(5) << std::setfill('0') << i << ".rns1";
        run.snapshot(name.str(), r.snapshots[i].field);
    }
    std::string times = "index,t\n";
    for (std::size_t i = 0; i < r.snapshots.size(); ++i)
        times += std::to_string(i) + "," + format_double(r.snapshots[i].t) + "\n";
    run.text(prefix + "snapshots.csv", times);
    run.plot(prefix + "energy.plot.json",
             line_plot("energy functional", prefix + "ledger.csv", "t", {"E_v", "E_u", "l2sq_v"}));
    run.manifest.set(prefix + "steps", r.steps);
    run.manifest.set(prefix + "t_final", r.t_final);
    for (std::size_t i = 0; i < r.warnings.size(); ++i)
        run.manifest.set(prefix + "warning." + std::to_string(i), r.warnings[i]);
}

int run_solve(const RunConfig& cfg, Run& run, std::ostream& log) {
    const SolverConfig s = cfg.solver();
    warn_family(cfg.base_data(), log, run.manifest);
    record_randomization(run.manifest, s.grid, cfg.family, cfg.alpha, cfg.seed);
    record_solver(run.manifest, s);
    try {
        const SolveResult r = solve(s);
        emit_solve(run, r, "");
        // Smallness of the forcing: ||g||_{L^3_t L^9_x} next to ||f^w||_{H^-alpha}.
        const double g_norm = heat_lplq(dealiased_data(s.data), 3.0, 9.0, TimeGrid::log_spaced(s.T));
        const double f_norm = sobolev_norm(s.data, -s.alpha);
        run.text("summary.csv", summary_csv({{"forcing_L3L9", g_norm},
                                             {"data_negative_norm", f_norm},
                                             {"ratio", f_norm > 0 ? g_norm / f_norm : 0.0},
                                             {"E_v_final", r.ledger.back().E_v},
                                             {"terminal_residual", r.ledger.back().residual}}));
        for (const auto& w : r.warnings) log << "warning: " << w << "\n";
        log << "solve: " << r.steps << " steps, E_v(T)=" << r.ledger.back().E_v
            << " residual=" << r.ledger.back().residual << "\n";
    } catch (const NonFiniteStateError& e) {
        emit_solve(run, e.partial(), "partial_");
        throw;
    }
    return kExitOk;
}

int run_restart(const RunConfig& cfg, Run& run, std::ostream& log) {
    SolverConfig s = cfg.solver();
    s.T = cfg.restart_tau;
    s.snapshot_every = 0;
    warn_family(cfg.base_data(), log, run.manifest);
    record_randomization(run.manifest, s.grid, cfg.family, cfg.alpha, cfg.seed);
    record_solver(run.manifest, s);
    const SolveResult first = solve(s);
    const SpectralField u = assemble_full_field(s, first.snapshots.back());
    run.snapshot("u_tau.rns1", u);
    SolverConfig rc = s;
    rc.dt = cfg.restart_dt;
    rc.T = cfg.restart_duration;
    rc.snapshot_every = cfg.snapshot_every;
    run.manifest.set("restart.tau", cfg.restart_tau);
    run.manifest.set("restart.dt", cfg.restart_dt);
    run.manifest.set("restart.duration", cfg.restart_duration);
    const SolveResult r = [&] {
        try {
            return restart_full_nse(u, rc);
        } catch (const NonFiniteStateError& e) {
            emit_solve(run, e.partial(), "partial_restart_");
            throw;
        }
    }();
    emit_solve(run, r, "restart_");
    double worst = 0.0;
    const bool ok = leray_inequality_holds(r, 1e-6, &worst);
    run.text("restart_summary.csv", summary_csv({{"leray_inequality_holds", ok ? 1.0 : 0.0},
                                                 {"worst_relative_excess", worst},
                                                 {"tolerance", 1e-6}}));
    log << "restart: energy inequality " << (ok ? "holds" : "FAILS") << " (worst excess " << worst << ")\n";
    return kExitOk;
}

int run_energy_report(const RunConfig& cfg, Run& run, std::ostream& log) {
    SolverConfig s = cfg.solver();
    s.snapshot_every = 0;
    warn_family(cfg.base_data(), log, run.manifest);
    record_randomization(run.manifest, s.grid, cfg.family, cfg.alpha, cfg.seed);
    record_solver(run.manifest, s);
    std::string csv = "dt,E_v_final,terminal_residual,max_abs_residual,ratio\n";
    double prev = 0.0;
    for (int level = 0; level < cfg.energy_levels; ++level) {
        SolverConfig sl = s;
        sl.dt = std::ldexp(cfg.dt, -level);
        const SolveResult r = solve(sl);
        double worst = 0.0;
        for (const auto& row : r.ledger) worst = std::max(worst, std::abs(row.residual));
        const double term = r.ledger.back().residual;
        csv += format_double(sl.dt) + "," + format_double(r.ledger.back().E_v) + "," + format_double(term) + "," +
               format_double(worst) + "," + (level ? format_double(prev / term) : std::string("")) + "\n";
        log << "energy-report: dt=" << sl.dt << " residual=" << term;
        if (level) log << " ratio=" << prev / term;
        log << "\n";
        prev = term;
        if (level == 0) run.file("ledger.csv", [&](std::ostream& o) { write_ledger_csv(o, r.ledger); });
    }
    run.text("energy_report.csv", csv);
    run.plot("energy_report.plot.json",
             line_plot("energy identity residual", "energy_report.csv", "dt", {"terminal_residual"}, "log", "log"));
    return kExitOk;
}

int run_verify(const RunConfig& cfg, Run& run, std::ostream& log) {
    const auto results = run_invariant_suite(cfg.threads);
    std::string csv = "invariant,anchor,status,value,limit\n";
    int failed = 0;
    for (const auto& r : results) {
        const char* status = r.pass ? "PASS" : "FAIL";
        failed += !r.pass;
        csv += r.name + ",\"" + r.anchor + "\"," + status + "," + format_double(r.value) + "," +
               format_double(r.limit) + "\n";
        log << std::left << std::setw(5) << status << std::setw(26) << r.name << " [" << r.anchor << "] "
            << r.detail << "\n";
    }
    run.text("verify.csv", csv);
    log << "verify: " << results.size() - failed << "/" << results.size() << " invariants hold\n";
    run.manifest.set("verify.failed", failed);
    return failed ? kExitInvariant : kExitOk;
}

}  // namespace

int dispatch(const std::string& subcommand, const RunConfig& cfg, std::ostream& log) {
    using Handler = int (*)(const RunConfig&, Run&, std::ostream&);
    static const std::vector<std::pair<std::string, Handler>> handlers = {
        {"gen", run_gen},           {"heat-norms", run_heat_norms}, {"jt-table", run_jt_table},
        {"mc-tail", run_mc_tail},   {"mc-moments", run_mc_moments}, {"coverage", run_coverage},
        {"solve", run_solve},       {"restart", run_restart},       {"energy-report", run_energy_report},
        {"verify", run_verify},
    };
    Handler handler = nullptr;
    for (const auto& [name, h] : handlers)
        if (name == subcommand) handler = h;
    if (!handler) {
        log << "error: unknown subcommand '" << subcommand << "'\n";
        return kExitConfig;
    }

    std::unique_ptr<Run> run;
    try {
        run = std::make_unique<Run>(subcommand, cfg);
        record_config(run->manifest, cfg);
        const int code = handler(cfg, *run, log);
        run->finish(code == kExitOk ? "ok" : "failed", code);
        return code;
    } catch (const Error& e) {
        const int code = exit_code_for(e.code());
        log << "error: " << e.what() << "\n";
        if (run) {
            run->manifest.set("run.error", e.what());
            try {
                run->finish(std::string(to_string(e.code())), code);
            } catch (const Error&) {
            }
        }
        return code;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        if (run) {
            run->manifest.set("run.error", e.what());
            try {
                run->finish("error", kExitOther);
            } catch (const Error&) {
            }
        }
        return kExitOther;
    }
}

}  // namespace rns::cli
