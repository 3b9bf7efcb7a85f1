#include "rns/norms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rns/error.hpp"
#include "rns/kernels.hpp"
#include "rns/transform.hpp"

namespace rns {

double sobolev_norm(const SpectralField& F, double s) {
    if (s < 0.0 && !F.mean_zero())
        throw Error(ErrorCode::NegativeOrderOnNonzeroMean, "negative-order norm of a field with nonzero mean");
    const auto& k2 = F.grid().table().k2;
    std::vector<double> weight(k2.size());
    weight[0] = 0.0;
    for (std::size_t i = 1; i < k2.size(); ++i) weight[i] = s == 0.0 ? 1.0 : std::pow(k2[i], s);
    double total = 0.0;
    for (int c = 0; c < F.components(); ++c) total += kernels::weighted_norm_squared(F.component(c), weight);
    return std::sqrt(total);
}

double sum_abs_pow(const RealField& f, double q) {
    const std::size_t n = f.grid().points();
    std::vector<double> m2(n);
    if (f.components() == 1) {
        kernels::multiply(m2, f.component(0), f.component(0));
    } else if (f.components() == 3) {
        kernels::magnitude_squared(m2, f.component(0), f.component(1), f.component(2));
    } else {
        std::fill(m2.begin(), m2.end(), 0.0);
        for (int c = 0; c < f.components(); ++c) kernels::multiply_add(m2, f.component(c), f.component(c));
    }
    return sum_pow_of_squares(m2, q);
}

double sum_pow_of_squares(std::span<double> m2, double q) {
    if (q == 2.0) return kernels::sum(m2);
    // |u|^q = (|u|^2)^{q/2}; integer and half-integer exponents avoid pow.
    const double half = 0.5 * q;
    const double whole = std::floor(half);
    const bool integral = half == whole && half <= 16.0;
    const bool half_integral = (q == std::floor(q)) && !integral && q <= 33.0;
    if (integral || half_integral) {
        const int e = static_cast<int>(whole);
        for (double& v : m2) {
            double p = 1.0;
            for (int i = 0; i < e; ++i) p *= v;
            v = half_integral ? p * std::sqrt(v) : p;
        }
    } else {
        for (double& v : m2) v = std::pow(v, half);
    }
    return kernels::sum(m2);
}

double lebesgue_norm(const RealField& f, double q) {
    if (q == kInfinity) {
        double best = 0.0;
        const std::size_t n = f.grid().points();
        for (std::size_t k = 0; k < n; ++k) {
            double m2 = 0.0;
            for (int c = 0; c < f.components(); ++c) m2 += f.component(c)[k] * f.component(c)[k];
            best = std::max(best, m2);
        }
        return std::sqrt(best);
    }
    if (!(q >= 1.0)) throw Error(ErrorCode::DomainError, "lebesgue_norm requires q >= 1");
    return std::pow(sum_abs_pow(f, q) * f.grid().cell_volume(), 1.0 / q);
}

double support_radius(const SpectralField& F) {
    const auto& kmag = F.grid().table().kmag;
    double r = 0.0;
    for (int c = 0; c < F.components(); ++c) {
        const auto comp = F.component(c);
        for (std::size_t s = 0; s < comp.size(); ++s)
            if (comp[s] != cplx{}) r = std::max(r, kmag[s]);
    }
    return r;
}

double bernstein_ratio(const SpectralField& F, double p, double q) {
    if (!(p >= 1.0) || !(q >= p)) throw Error(ErrorCode::DomainError, "bernstein_ratio requires 1 <= p <= q");
    if (F.max_abs() == 0.0) throw Error(ErrorCode::ZeroField, "bernstein_ratio of the zero field");
    const RealField f = inverse_transform(F);
    const double radius = std::max(1.0, support_radius(F));
    const double inv_q = q == kInfinity ? 0.0 : 1.0 / q;
    const double scale = std::pow(radius, 3.0 * (1.0 / p - inv_q));
    return lebesgue_norm(f, q) / (scale * lebesgue_norm(f, p));
}

}  // namespace rns
