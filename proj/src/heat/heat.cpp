#include "rns/heat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

#include "rns/error.hpp"
#include "rns/kernels.hpp"
#include "rns/manifest.hpp"
#include "rns/norms.hpp"
#include "rns/transform.hpp"

namespace rns {

TimeGrid TimeGrid::log_spaced(double T, int n, double first_fraction) {
    if (!(T > 0.0) || n < 2 || !(first_fraction > 0.0 && first_fraction < 1.0))
        throw Error(ErrorCode::ValidationError, "log-spaced time grid needs T > 0, n >= 2, 0 < first < 1");
    TimeGrid g{{}, TimeScheme::log_spaced, T};
    g.nodes.resize(n);
    const double first = T * first_fraction;
    for (int i = 0; i < n; ++i) g.nodes[i] = first * std::pow(T / first, double(i) / (n - 1));
    g.nodes.back() = T;
    return g;
}

TimeGrid TimeGrid::uniform(double T, int n) {
    if (!(T > 0.0) || n < 1) throw Error(ErrorCode::ValidationError, "uniform time grid needs T > 0, n >= 1");
    TimeGrid g{{}, TimeScheme::uniform, T};
    g.nodes.resize(n);
    for (int i = 0; i < n; ++i) g.nodes[i] = T * double(i + 1) / n;
    g.nodes.back() = T;
    return g;
}

TimeGrid TimeGrid::refined() const {
    TimeGrid g{{}, scheme, T};
    g.nodes.reserve(2 * nodes.size());
    double prev = 0.0;
    for (double t : nodes) {
        const bool geometric = scheme == TimeScheme::log_spaced && prev > 0.0;
        g.nodes.push_back(geometric ? std::sqrt(prev * t) : 0.5 * (prev + t));
        g.nodes.push_back(t);
        prev = t;
    }
    return g;
}

void TimeGrid::validate() const {
    if (nodes.size() < 16) throw Error(ErrorCode::ValidationError, "time grid needs at least 16 nodes");
    if (!(nodes.front() > 0.0)) throw Error(ErrorCode::ValidationError, "time nodes must be positive");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1])) throw Error(ErrorCode::ValidationError, "time nodes must increase");
    if (std::abs(nodes.back() - T) > 1e-12 * T) throw Error(ErrorCode::ValidationError, "last node must equal T");
    if (scheme == TimeScheme::log_spaced && nodes.front() > T / 100.0)
        throw Error(ErrorCode::ValidationError, "log-spaced grid must start at or below T/100");
}

std::vector<double> TimeGrid::with_origin() const {
    std::vector<double> t;
    t.reserve(nodes.size() + 1);
    t.push_back(0.0);
    t.insert(t.end(), nodes.begin(), nodes.end());
    return t;
}

void heat_evolve_into(SpectralField& out, const SpectralField& f, double t) {
    if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "heat_evolve needs t >= 0");
    require_same_grid(out.grid(), f.grid(), "heat_evolve");
    if (out.components() != f.components()) throw Error(ErrorCode::GridMismatch, "component count differs");
    const auto& k2 = f.grid().table().k2;
    // |n|^2 is an integer; tabulate e^{-t m} once per distinct value.
    const int m = f.grid().size();
    std::vector<double> decay(3 * (m / 2) * (m / 2) + 1);
    for (std::size_t j = 0; j < decay.size(); ++j) decay[j] = std::exp(-t * double(j));
    for (int c = 0; c < f.components(); ++c) {
        const auto in = f.component(c);
        auto o = out.component(c);
        for (std::size_t s = 0; s < in.size(); ++s) o[s] = in[s] * decay[static_cast<std::size_t>(k2[s])];
    }
    out.set_hermitian(f.hermitian());
}

SpectralField heat_evolve(const SpectralField& f, double t) {
    SpectralField out(f.grid(), f.components(), f.hermitian());
    heat_evolve_into(out, f, t);
    return out;
}

double modewise_decay_constant(double s) {
    if (s == 0.0) return 1.0;
    if (!(s > 0.0)) return kInfinity;
    return std::pow(0.5 * s, 0.5 * s) * std::exp(-0.5 * s);
}

double deterministic_decay_ratio(const SpectralField& f, double alpha, int k, const TimeGrid& grid) {
    if (k < 0) throw Error(ErrorCode::DomainError, "derivative order must be nonnegative");
    const double base = sobolev_norm(f, -alpha);
    if (base == 0.0) throw Error(ErrorCode::ZeroField, "decay ratio of a zero field");
    const auto& k2 = f.grid().table().k2;
    double best = 0.0;
    for (double t : grid.nodes) {
        // ||D^k g(t)||^2 = sum |n|^{2k} e^{-2t|n|^2} |f(n)|^2
        double sum = 0.0;
        for (int c = 0; c < f.components(); ++c) {
            const auto u = f.component(c);
            for (std::size_t s = 1; s < u.size(); ++s) {
                if (u[s] == cplx{}) continue;
                sum += std::pow(k2[s], k) * std::exp(-2.0 * t * k2[s]) * std::norm(u[s]);
            }
        }
        best = std::max(best, std::pow(t, 0.5 * (alpha + k)) * std::sqrt(sum));
    }
    return best / base;
}

std::vector<std::vector<double>> lq_profile(const SpectralField& f, std::span<const double> qs,
                                            const TimeGrid& grid) {
    for (double q : qs)
        if (!(q >= 1.0)) throw Error(ErrorCode::DomainError, "L^q profile needs q >= 1");
    const GridSpec& G = f.grid();
    const std::vector<double> times = grid.with_origin();
    std::vector<std::vector<double>> out(qs.size(), std::vector<double>(times.size()));

    // Work on the half spectrum the real inverse FFT consumes, so each time
    // node costs one multiply pass and one c2r per component.
    const auto& slots = fft::half_slots(G);
    const std::size_t nh = slots.size();
    const auto& k2 = G.table().k2;
    const int C = f.components();
    std::vector<cplx> half(C * nh), work(nh);
    std::vector<std::uint32_t> k2_half(nh);
    for (std::size_t j = 0; j < nh; ++j) k2_half[j] = static_cast<std::uint32_t>(k2[slots[j]]);
    for (int c = 0; c < C; ++c) {
        const auto u = f.component(c);
        for (std::size_t j = 0; j < nh; ++j) half[c * nh + j] = u[slots[j]];
    }
    const int m = G.size();
    std::vector<double> decay(3 * (m / 2) * (m / 2) + 1);
    std::vector<double> x(G.points()), m2(G.points()), scratch(G.points());
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = 0; j < decay.size(); ++j) decay[j] = std::exp(-times[i] * double(j));
        std::fill(m2.begin(), m2.end(), 0.0);
        for (int c = 0; c < C; ++c) {
            const cplx* h = half.data() + c * nh;
            for (std::size_t j = 0; j < nh; ++j) work[j] = h[j] * decay[k2_half[j]];
            fft::inverse_from_half(G, work, x);
            kernels::multiply_add(m2, x, x);
        }
        for (std::size_t j = 0; j < qs.size(); ++j) {
            if (qs[j] == kInfinity) {
                out[j][i] = std::sqrt(*std::max_element(m2.begin(), m2.end()));
                continue;
            }
            std::copy(m2.begin(), m2.end(), scratch.begin());
            out[j][i] = std::pow(sum_pow_of_squares(scratch, qs[j]) * G.cell_volume(), 1.0 / qs[j]);
        }
    }
    return out;
}

std::vector<double> cumulative_lp(std::span<const double> values, std::span<const double> times, double p) {
    if (values.size() != times.size() || times.empty() || times[0] != 0.0)
        throw Error(ErrorCode::DomainError, "cumulative_lp needs matching series starting at t = 0");
    std::vector<double> out(values.size(), 0.0);
    double acc = 0.0;
    double prev = std::pow(values[0], p);
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double cur = std::pow(values[i], p);
        acc += 0.5 * (times[i] - times[i - 1]) * (prev + cur);
        out[i] = std::pow(acc, 1.0 / p);
        prev = cur;
    }
    return out;
}

LpLqResult heat_lplq_detailed(const SpectralField& f, double p, double q, const TimeGrid& grid,
                              double tolerance, int max_doublings) {
    if (!(p >= 2.0 && q >= 2.0 && std::isfinite(p) && std::isfinite(q)))
        throw Error(ErrorCode::DomainError, "heat_lplq needs 2 <= p, q < infinity");
    grid.validate();
    const double qs[1] = {q};
    const auto evaluate = [&](const TimeGrid& g) {
        const auto prof = lq_profile(f, qs, g);
        return cumulative_lp(prof[0], g.with_origin(), p).back();
    };
    LpLqResult r{evaluate(grid), 0.0, 0, grid};
    if (r.value == 0.0) return r;
    for (int d = 1; d <= max_doublings; ++d) {
        TimeGrid finer = r.grid.refined();
        const double v = evaluate(finer);
        r.relative_change = std::abs(v - r.value) / v;
        r.value = v;
        r.doublings = d;
        if (r.relative_change < tolerance) return r;
        r.grid = std::move(finer);
    }
    throw Error(ErrorCode::UnconvergedQuadrature,
                "L^p_t L^q_x quadrature changed by " + format_double(r.relative_change) + " after " +
                    std::to_string(max_doublings) + " doublings");
}

double heat_lplq(const SpectralField& f, double p, double q, const TimeGrid& grid) {
    return heat_lplq_detailed(f, p, q, grid).value;
}

double sigma_exponent(double p, double alpha) { return 1.0 / p - 0.5 * alpha; }

namespace {

void check_jk_domain(double alpha, double p) {
    if (!(alpha > 0.0 && alpha < 1.0 && p >= 2.0 && std::isfinite(p)))
        throw Error(ErrorCode::DomainError, "J/K need 0 < alpha < 1 and 2 <= p < infinity");
    if (alpha * p > 2.0 * (1.0 + 1e-15)) throw Error(ErrorCode::DomainError, "J/K need alpha p <= 2");
}

bool critical(double alpha, double p) { return std::abs(alpha * p - 2.0) <= 1e-15 * 2.0; }

// log(1 - e^{-x}) without cancellation at small x.
double log_one_minus_exp(double x) { return std::log(-std::expm1(-x)); }

// Maximizes a unimodal log-objective phi over (0, hi]. A coarse log-spaced
// grid locates the peak and confirms a single rise-then-fall; golden-section
// search in log x then refines to relative width `tol`.
double maximize_unimodal(const std::function<double(double)>& phi, double hi, double tol) {
    constexpr int kCoarse = 2001;
    const double lo = hi * 1e-12;
    const double step = std::log(hi / lo) / (kCoarse - 1);
    std::vector<double> v(kCoarse);
    for (int i = 0; i < kCoarse; ++i) v[i] = phi(lo * std::exp(step * i));

    int changes = 0;
    int last_sign = 0;
    for (int i = 1; i < kCoarse; ++i) {
        const double d = v[i] - v[i - 1];
        const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (sign == 0) continue;
        if (last_sign != 0 && sign != last_sign) ++changes;
        last_sign = sign;
    }
    const int peak = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
    if (changes != 1 || peak == 0 || peak == kCoarse - 1)
        throw Error(ErrorCode::UnconvergedQuadrature,
                    "maximand not unimodal inside the bracket (" + std::to_string(changes) + " sign changes)");

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(lo) + step * (peak - 1);
    double b = std::log(lo) + step * (peak + 1);
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = phi(std::exp(c));
    double fd = phi(std::exp(d));
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = phi(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = phi(std::exp(d));
        }
    }
    return std::max({fc, fd, v[peak]});
}

}  // namespace

double compute_K(double alpha, double p) {
    check_jk_domain(alpha, p);
    if (critical(alpha, p)) return 1.0;
    const double a = 0.5 * (alpha - 2.0 / p);
    const auto phi = [=](double u) { return a * std::log(u) + log_one_minus_exp(p * u) / p; };
    return std::exp(maximize_unimodal(phi, 50.0 * std::max(1.0, 1.0 / p), 1e-10));
}

double compute_J(double T, double alpha, double p) {
    check_jk_domain(alpha, p);
    if (!(T > 0.0)) throw Error(ErrorCode::DomainError, "J(T) needs T > 0");
    if (critical(alpha, p)) return 1.0;
    const double a = alpha - 2.0 / p;
    const auto phi = [=](double y) { return a * std::log(y) + log_one_minus_exp(p * y * y * T) / p; };
    return std::exp(maximize_unimodal(phi, std::sqrt(50.0 * std::max(1.0, 1.0 / p) / T), 1e-10));
}

double compute_J_lattice(double T, double alpha, double p, int max_k2) {
    check_jk_domain(alpha, p);
    if (!(T > 0.0)) throw Error(ErrorCode::DomainError, "J(T) needs T > 0");
    double best = 0.0;
    for (int m = 1; m <= max_k2; ++m) {
        // Legendre: m is a sum of three squares unless m = 4^a (8b + 7).
        int r = m;
        while (r % 4 == 0) r /= 4;
        if (r % 8 == 7) continue;
        const double y = std::sqrt(double(m));
        best = std::max(best, std::pow(y, alpha - 2.0 / p) * std::pow(-std::expm1(-p * m * T), 1.0 / p));
    }
    return best;
}

void write_norm_table(std::ostream& out, std::span<const NormRow> rows) {
    out << "alpha,p,q,T,seed,value\n";
    for (const auto& r : rows)
        out << format_double(r.alpha) << ',' << format_double(r.p) << ',' << format_double(r.q) << ','
            << format_double(r.T) << ',' << r.seed << ',' << format_double(r.value) << '\n';
}

void write_jk_table(std::ostream& out, std::span<const JKRow> rows) {
    out << "alpha,p,T,J,K,sigma\n";
    for (const auto& r : rows)
        out << format_double(r.alpha) << ',' << format_double(r.p) << ',' << format_double(r.T) << ','
            << format_double(r.J) << ',' << format_double(r.K) << ',' << format_double(r.sigma) << '\n';
}

}  // namespace rns
