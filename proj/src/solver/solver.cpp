#include "rns/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rns/heat.hpp"
#include "rns/kernels.hpp"
#include "rns/norms.hpp"
#include "rns/operators.hpp"
#include "rns/transform.hpp"

namespace rns {

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw Error(ErrorCode::ValidationError, "solver.dt must be positive");
    if (!(T > 0.0)) throw Error(ErrorCode::ValidationError, "solver.T must be positive");
    if (!(N >= 1.0)) throw Error(ErrorCode::ValidationError, "solver.N must be >= 1");
    if (N > grid.size() / 3.0) throw Error(ErrorCode::ValidationError, "solver.N must not exceed M/3");
    if (!(data.grid() == grid)) throw Error(ErrorCode::ValidationError, "solver data lives on another grid");
    if (data.components() != 3) throw Error(ErrorCode::ValidationError, "solver data needs three components");
    const double n = T / dt;
    if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
        throw Error(ErrorCode::ValidationError, "solver.T must be a multiple of solver.dt");
}

int SolverConfig::steps() const { return static_cast<int>(std::llround(T / dt)); }

SpectralField dealiased_data(const SpectralField& data) {
    SpectralField out = data;
    dealias_inplace(out);
    return out;
}

SpectralField divergence_of_product(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a.grid(), b.grid(), "divergence_of_product");
    if (a.components() != 3 || b.components() != 3)
        throw Error(ErrorCode::GridMismatch, "divergence_of_product needs three-component fields");
    const GridSpec& G = a.grid();
    const auto& table = G.table();
    const std::size_t np = G.points();
    const bool same = &a == &b;

    std::vector<double> xa(3 * np), xb(same ? 0 : 3 * np), prod(np);
    for (int c = 0; c < 3; ++c) {
        fft::inverse(G, a.component(c), {xa.data() + c * np, np});
        if (!same) fft::inverse(G, b.component(c), {xb.data() + c * np, np});
    }
    const double* pb = same ? xa.data() : xb.data();

    SpectralField out(G, 3, true);
    std::vector<cplx> T(G.modes());
    const auto& keep = table.dealiased;
    const auto accumulate = [&](int i, int j) {
        // out_i += i n_j T for the product a_i b_j
        auto o = out.component(i);
        for (std::size_t s = 0; s < T.size(); ++s)
            if (keep[s]) o[s] += cplx(-T[s].imag(), T[s].real()) * double(table.derivative[s][j]);
    };
    for (int i = 0; i < 3; ++i)
        for (int j = same ? i : 0; j < 3; ++j) {
            kernels::multiply(prod, {xa.data() + i * np, np}, {pb + j * np, np});
            fft::forward(G, prod, T);
            accumulate(i, j);
            if (same && j != i) accumulate(j, i);
        }
    return out;
}

namespace {

// Either the smoothed v-system (rho = rho(|n|/N), forcing g) or the plain
// Navier-Stokes system (rho = 1, no forcing).
struct System {
    GridSpec grid;
    std::vector<double> rho;
    std::vector<double> linear;  // |n|^2 rho^2
    SpectralField data;          // dealiased f^w
    bool forced;
    bool nonlinear;

    System(const SolverConfig& cfg, bool plain)
        : grid(cfg.grid), data(dealiased_data(cfg.data)), forced(!plain), nonlinear(cfg.nonlinear) {
        const auto& table = grid.table();
        rho = plain ? std::vector<double>(grid.modes(), 1.0)
                    : radial_multiplier(grid, [N = cfg.N](double k) { return cutoff_ramp(k / N); });
        linear.resize(grid.modes());
        for (std::size_t s = 0; s < linear.size(); ++s) linear[s] = table.k2[s] * rho[s] * rho[s];
    }

    SpectralField g(double t) const {
        if (!forced) return SpectralField(grid);
        return heat_evolve(data, t);
    }

    SpectralField smooth(const SpectralField& v) const { return apply_multiplier(v, rho); }

    SpectralField nonlinear_term(const SpectralField& v, double t) const {
        check_state(v);
        if (!nonlinear) return SpectralField(grid);
        SpectralField w = smooth(v);
        if (forced) w += g(t);
        SpectralField d = divergence_of_product(w, w);
        for (int c = 0; c < 3; ++c) {
            auto comp = d.component(c);
            for (std::size_t s = 0; s < comp.size(); ++s) comp[s] *= -rho[s];
        }
        leray_project_inplace(d);
        return d;
    }

    void check_state(const SpectralField& v) const {
        if (v.components() != 3 || !(v.grid() == grid))
            throw Error(ErrorCode::StateInvariantViolation, "state has the wrong shape");
        const double scale = v.max_abs();
        if (scale == 0.0) return;
        for (int c = 0; c < 3; ++c)
            if (std::abs(v.at(c, 0)) > 1e-10 * scale)
                throw Error(ErrorCode::StateInvariantViolation, "state has a nonzero mean");
        if (v.hermitian_defect() > 1e-10 * scale)
            throw Error(ErrorCode::StateInvariantViolation, "state lost conjugate symmetry");
        const double kmax = grid.size() / 2.0;
        if (divergence(v).max_abs() > 1e-10 * scale * kmax)
            throw Error(ErrorCode::StateInvariantViolation, "state is not divergence-free");
    }

    static void scale_by(SpectralField& F, const std::vector<double>& m) {
        for (int c = 0; c < F.components(); ++c) {
            auto comp = F.component(c);
            for (std::size_t s = 0; s < comp.size(); ++s) comp[s] *= m[s];
        }
    }

    SpectralField step(const SpectralField& v, double t, double h) const {
        std::vector<double> E(linear.size()), E2(linear.size());
        for (std::size_t s = 0; s < linear.size(); ++s) {
            E[s] = std::exp(-h * linear[s]);
            E2[s] = std::exp(-0.5 * h * linear[s]);
        }
        const SpectralField k1 = nonlinear_term(v, t);

        SpectralField a = v + (0.5 * h) * k1;
        scale_by(a, E2);
        const SpectralField k2 = nonlinear_term(a, t + 0.5 * h);

        SpectralField Ev2 = v;
        scale_by(Ev2, E2);
        const SpectralField k3 = nonlinear_term(Ev2 + (0.5 * h) * k2, t + 0.5 * h);

        SpectralField Ek3 = k3;
        scale_by(Ek3, E2);
        SpectralField Ev = v;
        scale_by(Ev, E);
        const SpectralField k4 = nonlinear_term(Ev + h * Ek3, t + h);

        SpectralField Ek1 = k1;
        scale_by(Ek1, E);
        SpectralField mid = k2 + k3;
        scale_by(mid, E2);
        SpectralField out = Ev;
        out += (h / 6.0) * (Ek1 + 2.0 * mid + k4);
        return out;
    }

    struct Rates {
        double l2sq, grad2, grad2_smoothed, rate, l2sq_u, grad2_u;
    };

    Rates rates(const SpectralField& v, double t) const {
        const auto& k2 = grid.table().k2;
        Rates r{};
        for (int c = 0; c < 3; ++c) {
            const auto u = v.component(c);
            for (std::size_t s = 0; s < u.size(); ++s) {
                const double m = std::norm(u[s]);
                r.l2sq += m;
                r.grad2 += k2[s] * m;
                r.grad2_smoothed += k2[s] * rho[s] * rho[s] * m;
            }
        }
        if (!forced) {
            r.l2sq_u = r.l2sq;
            r.grad2_u = r.grad2;
            return r;
        }
        const SpectralField gt = g(t);
        const SpectralField full = v + gt;
        for (int c = 0; c < 3; ++c) {
            const auto u = full.component(c);
            for (std::size_t s = 0; s < u.size(); ++s) {
                const double m = std::norm(u[s]);
                r.l2sq_u += m;
                r.grad2_u += k2[s] * m;
            }
        }
        if (!nonlinear) return r;
        // 2 int grad(Pv):(g (x) w) = -2 Re <Pv, div(g (x) w)>, w = Pv + g.
        const SpectralField u = smooth(v);
        const SpectralField d = divergence_of_product(gt, u + gt);
        double inner = 0.0;
        for (int c = 0; c < 3; ++c) {
            const auto a = u.component(c);
            const auto b = d.component(c);
            for (std::size_t s = 0; s < a.size(); ++s) inner += (std::conj(a[s]) * b[s]).real();
        }
        r.rate = -2.0 * inner;
        return r;
    }
};

struct LedgerBuilder {
    const System& sys;
    std::vector<LedgerRow>& rows;
    System::Rates prev{};
    double initial = 0.0;
    double cum = 0.0, cum_smoothed = 0.0, cum_u = 0.0, cum_rate = 0.0;

    void add(const SpectralField& v, double t) {
        const System::Rates r = sys.rates(v, t);
        if (rows.empty()) {
            initial = r.l2sq;
        } else {
            const double h = t - rows.back().t;
            cum += 0.5 * h * (prev.grad2 + r.grad2);
            cum_smoothed += 0.5 * h * (prev.grad2_smoothed + r.grad2_smoothed);
            cum_u += 0.5 * h * (prev.grad2_u + r.grad2_u);
            cum_rate += 0.5 * h * (prev.rate + r.rate);
        }
        prev = r;
        LedgerRow row{};
        row.t = t;
        row.l2sq_v = r.l2sq;
        row.cum_dissipation = cum;
        row.cum_smoothed = cum_smoothed;
        row.E_v = r.l2sq + cum;
        row.E_u = r.l2sq_u + cum_u;
        row.rhs_identity = initial + cum_rate;
        row.residual = (r.l2sq + 2.0 * cum_smoothed - row.rhs_identity) / std::max(row.E_v, 1e-300);
        if (row.E_v == 0.0 && r.l2sq + 2.0 * cum_smoothed == row.rhs_identity) row.residual = 0.0;
        rows.push_back(row);
    }
};

double max_speed(const SpectralField& w) {
    RealField x(w.grid(), 3);
    for (int c = 0; c < 3; ++c) fft::inverse(w.grid(), w.component(c), x.component(c));
    return lebesgue_norm(x, kInfinity);
}

SolveResult integrate(const System& sys, const SpectralField& v0, const SolverConfig& cfg) {
    auto result = std::make_shared<SolveResult>(SolveResult{{}, {}, v0, 0.0, 0, {}});
    LedgerBuilder ledger{sys, result->ledger};
    SpectralField v = v0;
    const int n = cfg.steps();
    result->snapshots.push_back({0.0, v});
    ledger.add(v, 0.0);
    const double kmax = sys.grid.dealias_limit() * std::sqrt(3.0);
    for (int k = 0; k < n; ++k) {
        const double t = k * cfg.dt;
        if (k % 16 == 0 && sys.nonlinear) {
            SpectralField w = sys.smooth(v);
            if (sys.forced) w += sys.g(t);
            const double speed = max_speed(w);
            if (speed > 0.0 && cfg.dt > 1.0 / (kmax * speed) && result->warnings.size() < 8)
                result->warnings.push_back("step " + std::to_string(k) + ": dt " + format_double(cfg.dt) +
                                           " exceeds the advective limit " + format_double(1.0 / (kmax * speed)));
        }
        v = sys.step(v, t, cfg.dt);
        const double tn = (k + 1) * cfg.dt;
        result->steps = k + 1;
        result->t_final = tn;
        if (!v.all_finite()) {
            result->final_state = v;
            throw NonFiniteStateError("non-finite coefficient at t = " + format_double(tn), result);
        }
        ledger.add(v, tn);
        if ((cfg.snapshot_every > 0 && (k + 1) % cfg.snapshot_every == 0) || k + 1 == n) {
            if (result->snapshots.back().t != tn) result->snapshots.push_back({tn, v});
        }
    }
    result->final_state = std::move(v);
    return std::move(*result);
}

}  // namespace

SpectralField forcing_at(const SolverConfig& cfg, double t) { return heat_evolve(dealiased_data(cfg.data), t); }

SpectralField nonlinear_term(const SpectralField& v, double t, const SolverConfig& cfg) {
    return System(cfg, false).nonlinear_term(v, t);
}

SpectralField assemble_rhs(const SpectralField& v, double t, const SolverConfig& cfg) {
    const System sys(cfg, false);
    SpectralField out = sys.nonlinear_term(v, t);
    for (int c = 0; c < 3; ++c) {
        auto o = out.component(c);
        const auto u = v.component(c);
        for (std::size_t s = 0; s < o.size(); ++s) o[s] -= sys.linear[s] * u[s];
    }
    return out;
}

SpectralField step(const SpectralField& v, double t, const SolverConfig& cfg) {
    return System(cfg, false).step(v, t, cfg.dt);
}

SolveResult solve(const SolverConfig& cfg) {
    cfg.validate();
    if (cfg.integrator != Integrator::if_rk4)
        throw Error(ErrorCode::ValidationError, "solve integrates with if_rk4; use picard_iterate for the Picard map");
    const System sys(cfg, false);
    return integrate(sys, SpectralField(cfg.grid), cfg);
}

SolveResult restart_full_nse(const SpectralField& u_tau, const SolverConfig& cfg) {
    SolverConfig plain = cfg;
    plain.N = 1.0;
    plain.data = SpectralField(cfg.grid);
    plain.validate();
    require_same_grid(u_tau.grid(), cfg.grid, "restart_full_nse");
    SpectralField u0 = u_tau;
    dealias_inplace(u0);
    const System sys(plain, true);
    return integrate(sys, u0, plain);
}

SpectralField assemble_full_field(const SolverConfig& cfg, const Snapshot& v_tau) {
    return forcing_at(cfg, v_tau.t) + v_tau.field;
}

std::vector<double> energy_identity_residual(const SolveResult& result) {
    std::vector<double> r;
    r.reserve(result.ledger.size());
    for (const auto& row : result.ledger) r.push_back(row.residual);
    return r;
}

bool leray_inequality_holds(const SolveResult& restart, double tol, double* worst) {
    if (restart.ledger.empty()) return true;
    const double start = restart.ledger.front().l2sq_v;
    double excess = -kInfinity;
    bool ok = true;
    for (const auto& row : restart.ledger) {
        const double lhs = row.l2sq_v + 2.0 * row.cum_dissipation;
        excess = std::max(excess, start > 0.0 ? lhs / start - 1.0 : lhs);
        ok = ok && lhs <= start * (1.0 + tol);
    }
    if (worst) *worst = excess;
    return ok;
}

CancellationResult cancellation_check(const SpectralField& v, const SpectralField* g) {
    const auto inner = [](const SpectralField& a, const SpectralField& b) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c)
            for (std::size_t k = 0; k < a.grid().modes(); ++k) s += (std::conj(a.at(c, k)) * b.at(c, k)).real();
        return s;
    };
    CancellationResult r{0.0, 0.0, 0.0};
    const double vn = v.norm();
    if (vn == 0.0) return r;
    r.self = std::abs(inner(v, leray_project(divergence_of_product(v, v))));
    const double grad_v = sobolev_norm(v, 1.0);
    double grad_g = 0.0;
    if (g) {
        r.transport = std::abs(inner(v, leray_project(divergence_of_product(v, *g))));
        grad_g = sobolev_norm(*g, 1.0);
    }
    r.scale = vn * grad_v * (grad_v + grad_g);
    return r;
}

InequalityResult holder_interpolation_check(const SpectralField& v) {
    const RealField x = inverse_transform(v);
    const double lhs = lebesgue_norm(x, 18.0 / 7.0);
    const double rhs = std::cbrt(std::pow(lebesgue_norm(x, 2.0), 2.0) * lebesgue_norm(x, 6.0));
    return {lhs, rhs, lhs <= rhs * (1.0 + 1e-10)};
}

InequalityResult negative_interpolation_check(const SpectralField& w) {
    const double lhs = sobolev_norm(w, 0.0);
    if (lhs == 0.0) return {0.0, 0.0, true};
    const double rhs = std::cbrt(sobolev_norm(w, -2.0) * std::pow(sobolev_norm(w, 1.0), 2.0));
    return {lhs, rhs, lhs <= rhs * (1.0 + 1e-10)};
}

PicardResult picard_iterate(const SolverConfig& cfg, double t1, int iters, int intervals) {
    cfg.validate();
    if (iters < 3) throw Error(ErrorCode::ValidationError, "picard_iterate needs at least 3 iterations");
    if (!(t1 > 0.0) || intervals < 1) throw Error(ErrorCode::ValidationError, "picard_iterate needs t1 > 0");
    const System sys(cfg, false);
    const double h = t1 / intervals;
    std::vector<double> E(sys.linear.size());
    for (std::size_t s = 0; s < E.size(); ++s) E[s] = std::exp(-h * sys.linear[s]);
    const auto& k2 = cfg.grid.table().k2;

    std::vector<SpectralField> v(intervals + 1, SpectralField(cfg.grid));
    PicardResult out{{}, {}, false, SpectralField(cfg.grid)};
    for (int it = 0; it < iters; ++it) {
        std::vector<SpectralField> Nv;
        Nv.reserve(intervals + 1);
        for (int j = 0; j <= intervals; ++j) Nv.push_back(sys.nonlinear_term(v[j], j * h));
        // I(v)(t_j) = E I(v)(t_{j-1}) + h/2 (E N_{j-1} + N_j)
        std::vector<SpectralField> next(intervals + 1, SpectralField(cfg.grid));
        for (int j = 1; j <= intervals; ++j) {
            SpectralField acc = next[j - 1] + (0.5 * h) * Nv[j - 1];
            System::scale_by(acc, E);
            acc += (0.5 * h) * Nv[j];
            next[j] = std::move(acc);
        }
        double sup = 0.0, grad_sq = 0.0, prev_g = 0.0;
        for (int j = 0; j <= intervals; ++j) {
            const SpectralField d = next[j] - v[j];
            sup = std::max(sup, d.norm());
            double g2 = 0.0;
            for (int c = 0; c < 3; ++c) {
                const auto comp = d.component(c);
                for (std::size_t s = 0; s < comp.size(); ++s) g2 += k2[s] * std::norm(comp[s]);
            }
            if (j > 0) grad_sq += 0.5 * h * (prev_g + g2);
            prev_g = g2;
        }
        out.differences.push_back(sup + std::sqrt(grad_sq));
        v = std::move(next);
    }
    for (std::size_t k = 1; k < out.differences.size(); ++k) {
        const double prev = out.differences[k - 1];
        const double ratio = prev > 0.0 ? out.differences[k] / prev : 0.0;
        out.ratios.push_back(ratio);
        out.non_contraction = out.non_contraction || ratio > 1.0;
    }
    out.at_t1 = v.back();
    return out;
}

std::vector<Snapshot> scaling_transform(const std::vector<Snapshot>& u, int lambda, const GridSpec& target) {
    if (lambda < 1) throw Error(ErrorCode::DomainError, "scaling factor must be a positive integer");
    std::vector<Snapshot> out;
    out.reserve(u.size());
    const int limit = target.dealias_limit();
    for (const auto& snap : u) {
        const GridSpec& G = snap.field.grid();
        const auto& table = G.table();
        SpectralField F(target, snap.field.components());
        for (std::size_t s = 0; s < G.modes(); ++s) {
            bool active = false;
            for (int c = 0; c < F.components(); ++c) active = active || snap.field.at(c, s) != cplx{};
            if (!active) continue;
            const Wavevector& m = table.wavevector[s];
            const Wavevector n{lambda * m[0], lambda * m[1], lambda * m[2]};
            if (std::abs(n[0]) > limit || std::abs(n[1]) > limit || std::abs(n[2]) > limit)
                throw Error(ErrorCode::FrequencyOverflow, "scaled mode leaves the target's dealiased band");
            const std::size_t t = target.slot(n);
            for (int c = 0; c < F.components(); ++c) F.at(c, t) = double(lambda) * snap.field.at(c, s);
        }
        out.push_back({snap.t / (double(lambda) * lambda), std::move(F)});
    }
    return out;
}

double nse_residual(const std::vector<Snapshot>& u) {
    if (u.size() < 3) throw Error(ErrorCode::DomainError, "nse_residual needs at least three snapshots");
    const double dt = u[1].t - u[0].t;
    for (std::size_t k = 1; k < u.size(); ++k)
        if (std::abs((u[k].t - u[k - 1].t) - dt) > 1e-9 * dt)
            throw Error(ErrorCode::DomainError, "nse_residual needs equally spaced snapshots");
    SolverConfig cfg;
    cfg.grid = u[0].field.grid();
    cfg.data = SpectralField(cfg.grid);
    cfg.N = 1.0;
    const System sys(cfg, true);
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < u.size(); ++k) {
        const SpectralField& v = u[k].field;
        const SpectralField nl = sys.nonlinear_term(v, u[k].t);
        SpectralField r = (1.0 / (2.0 * dt)) * (u[k + 1].field - u[k - 1].field);
        SpectralField lin(cfg.grid);
        for (int c = 0; c < 3; ++c) {
            auto o = lin.component(c);
            const auto x = v.component(c);
            for (std::size_t s = 0; s < o.size(); ++s) o[s] = sys.linear[s] * x[s];
        }
        r += lin;
        r -= nl;
        const double scale = lin.norm() + nl.norm();
        if (scale > 0.0) worst = std::max(worst, r.norm() / scale);
    }
    return worst;
}

void write_ledger_csv(std::ostream& out, const std::vector<LedgerRow>& rows) {
    out << "t,l2sq_v,cum_dissipation,E_v,E_u,rhs_identity,residual\n";
    for (const auto& r : rows)
        out << format_double(r.t) << ',' << format_double(r.l2sq_v) << ',' << format_double(r.cum_dissipation) << ','
            << format_double(r.E_v) << ',' << format_double(r.E_u) << ',' << format_double(r.rhs_identity) << ','
            << format_double(r.residual) << '\n';
}

void record_solver(Manifest& manifest, const SolverConfig& cfg) {
    manifest.set("solver.grid", cfg.grid.size());
    manifest.set("solver.N", cfg.N);
    manifest.set("solver.dt", cfg.dt);
    manifest.set("solver.T", cfg.T);
    manifest.set("solver.alpha", cfg.alpha);
    manifest.set("solver.integrator", cfg.integrator == Integrator::if_rk4 ? "if_rk4" : "picard");
    manifest.set("solver.scheme", kIntegratorName);
    manifest.set("solver.dealias", kDealiasName);
    manifest.set("solver.snapshot_every", cfg.snapshot_every);
    manifest.set("solver.nonlinear", cfg.nonlinear);
    manifest.set("fft.backend", fft::backend_name());
}

}  // namespace rns
