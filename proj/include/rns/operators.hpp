#pragma once

#include <functional>
#include <vector>

#include "rns/spectral_field.hpp"

namespace rns {

/// Cosine-squared ramp: 1 on [0,1], 0 on [2,inf), cos^2(pi (r-1)/2) between.
double cutoff_ramp(double r) noexcept;

/// Per-mode multiplication by a real function of the wavevector (applied
/// to every component). A real, even multiplier preserves hermitian symmetry.
SpectralField apply_multiplier(const SpectralField& F, std::span<const double> multiplier);

/// Builds the multiplier table m(n) for every storage slot.
std::vector<double> radial_multiplier(const GridSpec& grid, const std::function<double(double)>& of_kmag);

/// Divergence-free projection, (I - n n^T / |n|^2) per mode; n = 0 untouched.
/// Uses the derivative wavevector, so Nyquist content stays real.
SpectralField leray_project(const SpectralField& F);
/// In-place variant on a three-component field.
void leray_project_inplace(SpectralField& F);

/// Scalar coefficients i n . u(n).
SpectralField divergence(const SpectralField& F);

/// Smooth low-pass rho(|n|/N).
SpectralField smooth_cutoff(const SpectralField& F, double N);

/// Littlewood-Paley band rho(|n|/M) - rho(2|n|/M), M >= 2.
SpectralField band_projector(const SpectralField& F, double M);

/// Zeroes every mode outside the two-thirds dealiasing band.
void dealias_inplace(SpectralField& F);

/// Gradient tensor of a three-component field: component 3*i + j holds
/// the coefficients of d_j u_i. Derivatives across a Nyquist plane vanish.
SpectralField gradient(const SpectralField& F);

}  // namespace rns
