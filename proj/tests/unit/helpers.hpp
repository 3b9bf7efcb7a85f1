#pragma once

// Test-only generators and oracles. Nothing here calls into the code paths
// it is used to check beyond constructing inputs.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "rns/grid.hpp"
#include "rns/operators.hpp"
#include "rns/spectral_field.hpp"
#include "rns/transform.hpp"

namespace testing {

using rns::cplx;

inline rns::RealField random_real_field(const rns::GridSpec& grid, std::uint64_t seed, int components = 3) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    rns::RealField f(grid, components);
    for (double& v : f.data()) v = normal(rng);
    return f;
}

/// Hermitian field with independent complex Gaussian coefficients on
/// 0 < |n_i| <= radius (sup-norm box), optionally mean-zero and projected.
inline rns::SpectralField random_box_field(const rns::GridSpec& grid, int radius, std::uint64_t seed,
                                           bool divergence_free = true) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    rns::SpectralField F(grid, 3, true);
    const auto& table = grid.table();
    for (std::size_t s = 1; s < grid.modes(); ++s) {
        const auto& n = table.wavevector[s];
        if (std::abs(n[0]) > radius || std::abs(n[1]) > radius || std::abs(n[2]) > radius) continue;
        if (table.nyquist[s]) continue;
        const std::size_t c = table.conjugate[s];
        if (c < s) continue;
        for (int comp = 0; comp < 3; ++comp) {
            const cplx v(normal(rng), normal(rng));
            F.at(comp, s) = v;
            F.at(comp, c) = std::conj(v);
        }
    }
    if (divergence_free) rns::leray_project_inplace(F);
    return F;
}

/// Dense convolution oracle for the coefficients of a_i b_j in the
/// orthonormal basis, evaluated at wavevector k over the full integer lattice
/// (no aliasing): (2pi)^{-3/2} sum_m a(m) b(k - m).
inline cplx dense_product(const rns::SpectralField& A, int i, const rns::SpectralField& B, int j,
                          const rns::Wavevector& k) {
    const auto& grid = A.grid();
    const auto& table = grid.table();
    cplx acc{};
    for (std::size_t s = 0; s < grid.modes(); ++s) {
        const cplx a = A.at(i, s);
        if (a == cplx{}) continue;
        const auto& m = table.wavevector[s];
        const rns::Wavevector r{k[0] - m[0], k[1] - m[1], k[2] - m[2]};
        if (!grid.contains(r)) continue;
        acc += a * B.at(j, grid.slot(r));
    }
    return acc * std::pow(2.0 * std::numbers::pi, -1.5);
}

}  // namespace testing
