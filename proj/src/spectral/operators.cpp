#include "rns/operators.hpp"

#include <cmath>
#include <numbers>

#include "rns/error.hpp"
#include "rns/kernels.hpp"

namespace rns {

double cutoff_ramp(double r) noexcept {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double c = std::cos(0.5 * std::numbers::pi * (r - 1.0));
    return c * c;
}

std::vector<double> radial_multiplier(const GridSpec& grid, const std::function<double(double)>& of_kmag) {
    const auto& kmag = grid.table().kmag;
    std::vector<double> m(kmag.size());
    for (std::size_t s = 0; s < kmag.size(); ++s) m[s] = of_kmag(kmag[s]);
    return m;
}

SpectralField apply_multiplier(const SpectralField& F, std::span<const double> multiplier) {
    SpectralField out(F.grid(), F.components(), F.hermitian());
    for (int c = 0; c < F.components(); ++c) kernels::scaled_copy(out.component(c), F.component(c), multiplier);
    return out;
}

void leray_project_inplace(SpectralField& F) {
    if (F.components() != 3) throw Error(ErrorCode::GridMismatch, "leray_project needs three components");
    const auto& table = F.grid().table();
    auto u0 = F.component(0);
    auto u1 = F.component(1);
    auto u2 = F.component(2);
    for (std::size_t s = 1; s < u0.size(); ++s) {
        if (table.derivative_k2[s] == 0.0) continue;
        const Wavevector& n = table.derivative[s];
        const cplx dot = double(n[0]) * u0[s] + double(n[1]) * u1[s] + double(n[2]) * u2[s];
        const cplx p = dot / table.derivative_k2[s];
        u0[s] -= double(n[0]) * p;
        u1[s] -= double(n[1]) * p;
        u2[s] -= double(n[2]) * p;
    }
}

SpectralField leray_project(const SpectralField& F) {
    SpectralField out = F;
    leray_project_inplace(out);
    return out;
}

SpectralField divergence(const SpectralField& F) {
    if (F.components() != 3) throw Error(ErrorCode::GridMismatch, "divergence needs three components");
    const auto& table = F.grid().table();
    SpectralField out(F.grid(), 1, F.hermitian());
    auto d = out.component(0);
    const auto u0 = F.component(0);
    const auto u1 = F.component(1);
    const auto u2 = F.component(2);
    for (std::size_t s = 0; s < d.size(); ++s) {
        const Wavevector& n = table.derivative[s];
        d[s] = cplx(0.0, 1.0) * (double(n[0]) * u0[s] + double(n[1]) * u1[s] + double(n[2]) * u2[s]);
    }
    return out;
}

SpectralField smooth_cutoff(const SpectralField& F, double N) {
    if (!(N >= 1.0)) throw Error(ErrorCode::DomainError, "smooth_cutoff requires N >= 1");
    const auto m = radial_multiplier(F.grid(), [N](double k) { return cutoff_ramp(k / N); });
    return apply_multiplier(F, m);
}

SpectralField band_projector(const SpectralField& F, double M) {
    if (!(M >= 2.0)) throw Error(ErrorCode::DomainError, "band_projector requires M >= 2");
    const auto m = radial_multiplier(
        F.grid(), [M](double k) { return cutoff_ramp(k / M) - cutoff_ramp(2.0 * k / M); });
    return apply_multiplier(F, m);
}

void dealias_inplace(SpectralField& F) {
    const auto& keep = F.grid().table().dealiased;
    for (int c = 0; c < F.components(); ++c) {
        auto comp = F.component(c);
        for (std::size_t s = 0; s < comp.size(); ++s)
            if (!keep[s]) comp[s] = cplx{};
    }
}

SpectralField gradient(const SpectralField& F) {
    if (F.components() != 3) throw Error(ErrorCode::GridMismatch, "gradient needs three components");
    const auto& table = F.grid().table();
    SpectralField out(F.grid(), 9, F.hermitian());
    for (int i = 0; i < 3; ++i) {
        const auto u = F.component(i);
        for (int j = 0; j < 3; ++j) {
            auto g = out.component(3 * i + j);
            for (std::size_t s = 0; s < g.size(); ++s)
                g[s] = cplx(0.0, table.derivative[s][j]) * u[s];
        }
    }
    return out;
}

}  // namespace rns
