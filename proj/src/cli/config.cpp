#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "rns/cli.hpp"
#include "rns/error.hpp"

namespace rns::cli {
namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool valid_key(const std::string& k) {
    if (k.empty() || k.front() == '.' || k.back() == '.') return false;
    return std::all_of(k.begin(), k.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    });
}

[[noreturn]] void invalid(const std::string& key, const std::string& msg) {
    throw Error(ErrorCode::ValidationError, key + ": " + msg);
}

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x))
        invalid(key, "expected a finite number, got '" + v + "'");
    return x;
}

long long to_integer(const std::string& key, const std::string& v) {
    long long x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) invalid(key, "expected an integer, got '" + v + "'");
    return x;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
    std::uint64_t x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
        invalid(key, "expected a non-negative integer, got '" + v + "'");
    return x;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) invalid(key, "expected a non-empty list");
    return out;
}

std::string list_text(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + format_double(xs[i]);
    return s;
}

int bounded_int(const std::string& key, const std::string& v, long long lo, long long hi) {
    const long long x = to_integer(key, v);
    if (x < lo || x > hi) invalid(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(x);
}

double positive(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    if (!(x > 0.0)) invalid(key, "must be positive");
    return x;
}

std::vector<double> positive_list(const std::string& key, const std::string& v) {
    auto xs = to_list(key, v);
    for (double x : xs)
        if (!(x > 0.0)) invalid(key, "entries must be positive");
    return xs;
}

struct Key {
    const char* name;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define RNS_DOUBLE(NAME, MEMBER, PARSE) \
    Key{NAME, [](RunConfig& c, const std::string& k, const std::string& v) { c.MEMBER = PARSE(k, v); }, \
        [](const RunConfig& c) { return format_double(c.MEMBER); }}
#define RNS_LIST(NAME, MEMBER) \
    Key{NAME, [](RunConfig& c, const std::string& k, const std::string& v) { c.MEMBER = positive_list(k, v); }, \
        [](const RunConfig& c) { return list_text(c.MEMBER); }}
#define RNS_INT(NAME, MEMBER, LO, HI) \
    Key{NAME, [](RunConfig& c, const std::string& k, const std::string& v) { c.MEMBER = bounded_int(k, v, LO, HI); }, \
        [](const RunConfig& c) { return std::to_string(c.MEMBER); }}

const std::vector<Key>& registry() {
    static const std::vector<Key> keys = {
        Key{"output.dir", [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; },
            [](const RunConfig& c) { return c.output_dir.string(); }},
        Key{"grid.size",
            [](RunConfig& c, const std::string& k, const std::string& v) {
                const long long m = to_integer(k, v);
                if (m % 2 != 0) invalid(k, "grid.size must be even");
                if (m < 4 || m > 1024) invalid(k, "grid.size must lie in [4, 1024]");
                c.grid_size = static_cast<int>(m);
            },
            [](const RunConfig& c) { return std::to_string(c.grid_size); }},
        Key{"alpha",
            [](RunConfig& c, const std::string& k, const std::string& v) {
                c.alpha = to_double(k, v);
                if (!(c.alpha > 0.0 && c.alpha <= 1.0)) invalid(k, "alpha must lie in (0, 1]");
            },
            [](const RunConfig& c) { return format_double(c.alpha); }},
        Key{"seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_unsigned(k, v); },
            [](const RunConfig& c) { return std::to_string(c.seed); }},
        RNS_INT("threads", threads, 0, 4096),
        Key{"data.family",
            [](RunConfig& c, const std::string& k, const std::string& v) {
                try {
                    c.family.kind = parse_family_kind(v);
                } catch (const Error&) {
                    invalid(k, "expected band_limited or power_law, got '" + v + "'");
                }
            },
            [](const RunConfig& c) { return to_string(c.family.kind); }},
        RNS_DOUBLE("data.gamma", family.gamma, to_double),
        RNS_DOUBLE("data.support_radius", family.support_radius, positive),
        RNS_DOUBLE("data.amplitude", family.amplitude, positive),
        Key{"data.phase_seed",
            [](RunConfig& c, const std::string& k, const std::string& v) { c.phase_seed = to_unsigned(k, v); },
            [](const RunConfig& c) { return std::to_string(c.phase_seed); }},
        RNS_LIST("heat.p", heat_p),
        RNS_LIST("heat.q", heat_q),
        RNS_LIST("heat.T", heat_T),
        RNS_INT("heat.nodes", heat_nodes, 16, 100000),
        RNS_LIST("jt.alpha", jt_alpha),
        RNS_LIST("jt.p", jt_p),
        RNS_LIST("jt.T", jt_T),
        Key{"ensemble.samples",
            [](RunConfig& c, const std::string& k, const std::string& v) {
                c.samples = to_unsigned(k, v);
                if (c.samples == 0) invalid(k, "must be at least 1");
            },
            [](const RunConfig& c) { return std::to_string(c.samples); }},
        RNS_INT("ensemble.time_nodes", time_nodes, 16, 100000),
        RNS_DOUBLE("tail.p", tail_p, positive),
        RNS_DOUBLE("tail.q", tail_q, positive),
        RNS_DOUBLE("tail.T", tail_T, positive),
        RNS_LIST("tail.lambdas", tail_lambdas),
        RNS_LIST("moments.r", moment_r),
        RNS_DOUBLE("coverage.p1", coverage.p1, positive),
        RNS_DOUBLE("coverage.q1", coverage.q1, positive),
        RNS_DOUBLE("coverage.delta", coverage.delta, positive),
        RNS_DOUBLE("coverage.p2", coverage.p2, positive),
        RNS_DOUBLE("coverage.q2", coverage.q2, positive),
        RNS_DOUBLE("coverage.lambda", coverage.lambda, positive),
        RNS_INT("coverage.max_rung", coverage.max_rung, 0, 40),
        RNS_DOUBLE("solver.N", N, positive),
        RNS_DOUBLE("solver.dt", dt, positive),
        RNS_DOUBLE("solver.T", T, positive),
        RNS_INT("solver.snapshot_every", snapshot_every, 0, 1 << 30),
        RNS_DOUBLE("picard.t1", picard_t1, positive),
        RNS_INT("picard.iters", picard_iters, 3, 1000),
        RNS_INT("picard.intervals", picard_intervals, 1, 1 << 20),
        RNS_DOUBLE("restart.tau", restart_tau, positive),
        RNS_DOUBLE("restart.duration", restart_duration, positive),
        RNS_DOUBLE("restart.dt", restart_dt, positive),
        RNS_INT("energy.levels", energy_levels, 2, 8),
    };
    return keys;
}

#undef RNS_DOUBLE
#undef RNS_LIST
#undef RNS_INT

void check_increasing(const std::string& key, const std::vector<double>& xs) {
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) invalid(key, "must be strictly increasing");
}

void validate(const RunConfig& c) {
    check_increasing("tail.lambdas", c.tail_lambdas);
    check_increasing("moments.r", c.moment_r);
    for (double a : c.jt_alpha)
        if (a > 1.0) invalid("jt.alpha", "entries must lie in (0, 1]");
    for (const auto* list : {&c.heat_p, &c.heat_q})
        for (double x : *list)
            if (x < 2.0) invalid(list == &c.heat_p ? "heat.p" : "heat.q", "exponents must be >= 2");
    if (c.tail_p < 2.0 || c.tail_q < 2.0) invalid("tail.p", "exponents must be >= 2");
    if (c.N > c.grid_size / 3.0) invalid("solver.N", "must not exceed grid.size / 3");
    if (c.N < 1.0) invalid("solver.N", "must be >= 1");
}

}  // namespace

EnsembleConfig RunConfig::ensemble() const {
    EnsembleConfig e;
    e.samples = samples;
    e.master_seed = seed;
    e.alpha = alpha;
    e.family = family;
    e.grid_size = grid_size;
    e.pq = {{tail_p, tail_q}};
    e.horizons = {tail_T};
    e.lambdas = tail_lambdas;
    e.r_grid = moment_r;
    e.threads = threads;
    e.time_nodes = time_nodes;
    return e;
}

GeneratedData RunConfig::base_data() const { return make_data(grid(), family, alpha, phase_seed); }

SolverConfig RunConfig::solver() const {
    SolverConfig s;
    s.grid = grid();
    s.N = N;
    s.dt = dt;
    s.T = T;
    s.alpha = alpha;
    s.snapshot_every = snapshot_every;
    s.data = randomize_field(base_data().field, draw_gaussians(s.grid, seed));
    return s;
}

std::filesystem::path RunConfig::resolved_output_dir() const {
    if (!output_dir.empty()) return output_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return "rnslab-out";
}

Entries parse_entries(const std::string& text) {
    Entries out;
    std::string prefix;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find_first_of("#;");
        const std::string s = trim(std::string_view(raw).substr(0, hash));
        if (s.empty()) continue;
        const std::string where = "line " + std::to_string(line);
        if (s.front() == '[') {
            if (s.back() != ']') throw Error(ErrorCode::ParseError, where + ": unterminated section header");
            const std::string name = trim(std::string_view(s).substr(1, s.size() - 2));
            if (!valid_key(name)) throw Error(ErrorCode::ParseError, where + ": bad section name '" + name + "'");
            prefix = name + ".";
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::ParseError, where + ": expected key = value");
        const std::string key = prefix + trim(std::string_view(s).substr(0, eq));
        const std::string value = trim(std::string_view(s).substr(eq + 1));
        if (!valid_key(key)) throw Error(ErrorCode::ParseError, where + ": bad key '" + key + "'");
        if (value.empty()) throw Error(ErrorCode::ParseError, where + ": empty value for '" + key + "'");
        for (const auto& [k, v] : out)
            if (k == key) throw Error(ErrorCode::ParseError, where + ": duplicate key '" + key + "'");
        out.emplace_back(key, value);
    }
    return out;
}

RunConfig build_config(const Entries& entries) {
    RunConfig cfg;
    const auto& keys = registry();
    for (const auto& [k, v] : entries) {
        const auto it = std::find_if(keys.begin(), keys.end(), [&](const Key& key) { return k == key.name; });
        if (it == keys.end()) invalid(k, "unknown key");
        it->set(cfg, k, v);
    }
    validate(cfg);
    return cfg;
}

RunConfig parse_config(const std::string& text) { return build_config(parse_entries(text)); }

std::string to_config_text(const RunConfig& cfg) {
    std::string out;
    for (const auto& key : registry()) {
        const std::string v = key.get(cfg);
        if (!v.empty()) out += std::string(key.name) + " = " + v + "\n";
    }
    return out;
}

std::string describe_keys() { return to_config_text(RunConfig{}); }

}  // namespace rns::cli
