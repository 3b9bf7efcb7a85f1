#pragma once

#include <limits>

#include "rns/spectral_field.hpp"

namespace rns {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Homogeneous Sobolev norm (sum_{n != 0} |n|^{2s} |u(n)|^2)^{1/2}.
/// Negative orders require a vanishing mean mode.
double sobolev_norm(const SpectralField& F, double s);

/// Grid-quadrature L^q norm of the pointwise vector magnitude; q = kInfinity
/// returns the grid maximum.
double lebesgue_norm(const RealField& f, double q);

/// Spectral support radius: the largest |n| carrying a nonzero coefficient.
double support_radius(const SpectralField& F);

/// ||F||_{L^q} / (N^{3(1/p - 1/q)} ||F||_{L^p}) with N the support radius.
double bernstein_ratio(const SpectralField& F, double p, double q);

/// sum over the grid of |f|^q (no cell volume); q = 2 avoids pow.
double sum_abs_pow(const RealField& f, double q);

/// sum_j (m2_j)^{q/2} for squared magnitudes m2; overwrites m2.
double sum_pow_of_squares(std::span<double> m2, double q);

}  // namespace rns
