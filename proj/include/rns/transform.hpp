#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rns/spectral_field.hpp"

namespace rns {

/// Grid samples -> orthonormal-basis coefficients. The l2 norm of the
/// result equals the grid-quadrature L2 norm of the input.
SpectralField forward_transform(const RealField& f);

/// Exact inverse of forward_transform. Throws NonHermitianInput when the
/// coefficients are not conjugate-symmetric to 1e-12 relative.
RealField inverse_transform(const SpectralField& F);

namespace fft {

/// Single-component transforms on caller-owned storage. `full` holds all
/// M^3 modes in FFT order; the inverse assumes (and does not check)
/// conjugate symmetry. Safe to call concurrently.
void forward(const GridSpec& grid, std::span<const double> values, std::span<std::complex<double>> full);
void inverse(const GridSpec& grid, std::span<const std::complex<double>> full, std::span<double> values);

/// Half-spectrum layout (last axis 0..M/2), as consumed by the real
/// inverse FFT. half_slots(grid)[j] is the full storage slot of half index j.
std::size_t half_modes(const GridSpec& grid) noexcept;
const std::vector<std::uint32_t>& half_slots(const GridSpec& grid);
void inverse_from_half(const GridSpec& grid, std::span<const std::complex<double>> half, std::span<double> values);

/// Identifier recorded in run manifests.
const char* backend_name() noexcept;

}  // namespace fft
}  // namespace rns
