#include "rns/prob.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

#include "rns/error.hpp"
#include "rns/manifest.hpp"
#include "rns/norms.hpp"

namespace rns {

void EnsembleConfig::validate_for_tail() const {
    if (samples < 100) throw Error(ErrorCode::InsufficientSamples, "tail estimates need at least 100 samples");
    for (std::size_t i = 1; i < lambdas.size(); ++i)
        if (!(lambdas[i] > lambdas[i - 1]))
            throw Error(ErrorCode::ValidationError, "lambda grid must be strictly increasing");
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::uint64_t member_seed(std::uint64_t master, std::size_t i) { return rng::derive_seed(master, i); }

double gaussian_abs_moment(double r) {
    const double log_m = 0.5 * r * std::log(2.0) + std::lgamma(0.5 * (r + 1.0)) - 0.5 * std::log(std::numbers::pi);
    return std::exp(log_m / r);
}

double gaussian_moment_constant() {
    double best = 0.0;
    for (int i = 0; i <= 6000; ++i) {
        const double r = 2.0 + i * 1e-3;
        best = std::max(best, gaussian_abs_moment(r) / std::sqrt(r));
    }
    return best;
}

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double ph = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (ph + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
    const double lo = k == 0 ? 0.0 : std::max(0.0, centre - half);
    const double hi = k == n ? 1.0 : std::min(1.0, centre + half);
    return {lo, hi};
}

std::vector<MomentRow> run_moment_experiment(std::span<const double> c, std::span<const double> r_grid,
                                             const EnsembleConfig& cfg) {
    if (cfg.samples < 100) throw Error(ErrorCode::InsufficientSamples, "moment estimates need at least 100 samples");
    double c2 = 0.0;
    for (double v : c) c2 += v * v;
    if (c2 == 0.0) throw Error(ErrorCode::ZeroField, "moment experiment needs a nonzero sequence");
    const double cnorm = std::sqrt(c2);

    // Member i uses the same stream as draw_gaussians(member_seed(i)).
    std::vector<double> x(cfg.samples);
    parallel_for(cfg.samples, cfg.threads, [&](std::size_t i) {
        const std::uint64_t seed = member_seed(cfg.master_seed, i);
        double s = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * rng::gaussian(seed, j);
        x[i] = s;
    });

    const double C = gaussian_moment_constant();
    const double n = static_cast<double>(cfg.samples);
    std::vector<MomentRow> rows;
    for (double r : r_grid) {
        if (!(r >= 1.0)) throw Error(ErrorCode::DomainError, "moment order must be >= 1");
        double mean = 0.0;
        for (double v : x) mean += std::pow(std::abs(v), r);
        mean /= n;
        double var = 0.0;
        for (double v : x) {
            const double d = std::pow(std::abs(v), r) - mean;
            var += d * d;
        }
        var /= n - 1.0;
        const double est = std::pow(mean, 1.0 / r);
        // delta method for m^{1/r}
        const double se = est * std::sqrt(var / n) / (r * mean);
        rows.push_back({r, est, cnorm * gaussian_abs_moment(r), se, est - 3.0 * se <= C * std::sqrt(r) * cnorm});
    }
    return rows;
}

TailFit fit_tail(std::span<const double> lambdas, std::span<const double> freqs, std::size_t samples) {
    const bool degenerate =
        std::all_of(freqs.begin(), freqs.end(), [](double f) { return f == 0.0 || f == 1.0; });
    if (degenerate) throw Error(ErrorCode::DegenerateTail, "every exceedance frequency is 0 or 1");
    const double n = static_cast<double>(samples);
    double sw = 0, sx = 0, sy = 0;
    std::vector<double> xs, ys, ws;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double P = freqs[i];
        if (P < 10.0 / n || P > 0.5) continue;
        const double w = n * P / (1.0 - P);
        xs.push_back(lambdas[i] * lambdas[i]);
        ys.push_back(std::log(P));
        ws.push_back(w);
        sw += w;
        sx += w * xs.back();
        sy += w * ys.back();
    }
    if (xs.size() < 2) throw Error(ErrorCode::DegenerateTail, "fewer than two bins inside the fit window");
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += ws[i] * (xs[i] - mx) * (xs[i] - mx);
        sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
        syy += ws[i] * (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw Error(ErrorCode::DegenerateTail, "fit window has a single lambda value");
    TailFit fit;
    const double slope = sxy / sxx;
    fit.beta = -slope;
    fit.intercept = my - slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.points = static_cast<int>(xs.size());
    return fit;
}

TailReport run_tail_experiment(const SpectralField& f, double p, double q, double T,
                               std::span<const double> lambdas, const EnsembleConfig& cfg) {
    cfg.validate_for_tail();
    if (cfg.alpha * p > 2.0 * (1.0 + 1e-15))
        throw Error(ErrorCode::DomainError, "tail experiment needs alpha p <= 2");
    TailReport rep;
    rep.f_norm = sobolev_norm(f, -cfg.alpha);
    // The grid is accepted once on the deterministic data and then shared by
    // every member, so all members see the same quadrature rule.
    rep.grid = heat_lplq_detailed(f, p, q, TimeGrid::log_spaced(T, cfg.time_nodes)).grid;
    const std::vector<double> times = rep.grid.with_origin();
    const double qs[1] = {q};

    rep.sample_norms.resize(cfg.samples);
    parallel_for(cfg.samples, cfg.threads, [&](std::size_t i) {
        const RandomDraw draw = draw_gaussians(f.grid(), member_seed(cfg.master_seed, i));
        const auto prof = lq_profile(randomize_field(f, draw), qs, rep.grid);
        rep.sample_norms[i] = cumulative_lp(prof[0], times, p).back();
    });

    std::vector<double> freqs;
    for (double lambda : lambdas) {
        std::size_t exceed = 0;
        for (double v : rep.sample_norms) exceed += !event_membership(v, lambda, rep.f_norm);
        const double freq = static_cast<double>(exceed) / cfg.samples;
        const Interval ci = wilson_interval(exceed, cfg.samples);
        rep.rows.push_back({p, q, T, lambda, freq, ci.lo, ci.hi, exceed});
        freqs.push_back(freq);
    }
    rep.fit = fit_tail(lambdas, freqs, cfg.samples);
    return rep;
}

bool event_membership(double norm_value, double lambda, double f_norm) { return norm_value < lambda * f_norm; }

TimeGrid merged_grid(double T, int base_nodes, std::span<const double> extra) {
    TimeGrid g = TimeGrid::log_spaced(T, base_nodes);
    for (double t : extra)
        if (t > 0.0 && t <= T) g.nodes.push_back(t);
    std::sort(g.nodes.begin(), g.nodes.end());
    std::vector<double> unique;
    for (double t : g.nodes)
        if (unique.empty() || t > unique.back() * (1.0 + 1e-12)) unique.push_back(t);
    g.nodes = std::move(unique);
    g.nodes.back() = T;
    return g;
}

namespace {

std::size_t node_of(std::span<const double> times, double t) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
    if (std::abs(times[best] - t) > 1e-12 * t) throw Error(ErrorCode::DomainError, "time not on the grid");
    return best;
}

}  // namespace

CoverageReport coverage_study(const SpectralField& f, const CoverageConfig& cov, const EnsembleConfig& cfg) {
    if (cov.max_rung < 0) throw Error(ErrorCode::ValidationError, "max_rung must be >= 0");
    if (!(cov.delta > 0.0 && cov.lambda > 0.0)) throw Error(ErrorCode::ValidationError, "delta and lambda must be positive");
    if (cfg.alpha * cov.p2 >= 2.0)
        throw Error(ErrorCode::ValidationError, "the shrinking-time ladder needs alpha p < 2");
    const double f_norm = sobolev_norm(f, -cfg.alpha);
    if (f_norm == 0.0) throw Error(ErrorCode::ZeroField, "coverage study of a zero field");

    std::vector<double> extra{cov.delta};
    for (int i = 0; i <= cov.max_rung; ++i) extra.push_back(std::ldexp(1.0, -i));
    const double horizon = std::max(1.0, cov.delta);
    const TimeGrid grid = merged_grid(horizon, cfg.time_nodes, extra);
    const std::vector<double> times = grid.with_origin();
    const std::size_t delta_node = node_of(times, cov.delta);
    std::vector<std::size_t> rung_node;
    for (int i = 0; i <= cov.max_rung; ++i) rung_node.push_back(node_of(times, std::ldexp(1.0, -i)));

    const double qs[2] = {cov.q1, cov.q2};
    CoverageReport rep;
    rep.lambda_rung.assign(cfg.samples, cov.max_rung + 1);
    rep.delta_rung.assign(cfg.samples, cov.max_rung + 1);
    parallel_for(cfg.samples, cfg.threads, [&](std::size_t m) {
        const RandomDraw draw = draw_gaussians(f.grid(), member_seed(cfg.master_seed, m));
        const auto prof = lq_profile(randomize_field(f, draw), qs, grid);
        const double n1 = cumulative_lp(prof[0], times, cov.p1)[delta_node];
        const auto n2 = cumulative_lp(prof[1], times, cov.p2);
        for (int j = 0; j <= cov.max_rung; ++j)
            if (event_membership(n1, std::ldexp(1.0, j), f_norm)) {
                rep.lambda_rung[m] = j;
                break;
            }
        for (int i = 0; i <= cov.max_rung; ++i)
            if (event_membership(n2[rung_node[i]], cov.lambda, f_norm)) {
                rep.delta_rung[m] = i;
                break;
            }
    });

    const double n = static_cast<double>(cfg.samples);
    for (int J = 0; J <= cov.max_rung; ++J) {
        std::size_t a = 0, b = 0, both = 0;
        for (std::size_t m = 0; m < cfg.samples; ++m) {
            a += rep.lambda_rung[m] <= J;
            b += rep.delta_rung[m] <= J;
            both += rep.lambda_rung[m] <= J && rep.delta_rung[m] <= J;
        }
        rep.rows.push_back({"lambda", J, a / n});
        rep.rows.push_back({"delta", J, b / n});
        rep.rows.push_back({"joint", J, both / n});
    }
    return rep;
}

void write_tail_csv(std::ostream& out, std::span<const TailRow> rows) {
    out << "p,q,T,lambda,freq,ci_lo,ci_hi\n";
    for (const auto& r : rows)
        out << format_double(r.p) << ',' << format_double(r.q) << ',' << format_double(r.T) << ','
            << format_double(r.lambda) << ',' << format_double(r.freq) << ',' << format_double(r.ci_lo) << ','
            << format_double(r.ci_hi) << '\n';
}

void write_moment_csv(std::ostream& out, std::span<const MomentRow> rows) {
    out << "r,estimate,oracle\n";
    for (const auto& r : rows)
        out << format_double(r.r) << ',' << format_double(r.estimate) << ',' << format_double(r.oracle) << '\n';
}

void write_coverage_csv(std::ostream& out, std::span<const CoverageRow> rows) {
    out << "ladder,J,fraction\n";
    for (const auto& r : rows) out << r.ladder << ',' << r.J << ',' << format_double(r.fraction) << '\n';
}

}  // namespace rns
