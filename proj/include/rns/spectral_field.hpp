#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "rns/grid.hpp"

namespace rns {

using cplx = std::complex<double>;

/// Fourier coefficients of a (vector) field on the lattice, expanded in the
/// orthonormal basis e_n(x) = (2pi)^{-3/2} exp(i n.x). Components are stored
/// one after the other, each in FFT order.
class SpectralField {
public:
    SpectralField(GridSpec grid, int components = 3, bool hermitian = true);

    const GridSpec& grid() const noexcept { return grid_; }
    int components() const noexcept { return components_; }
    /// Asserted conjugate symmetry conj(u(n)) == u(-n), i.e. a real field.
    bool hermitian() const noexcept { return hermitian_; }
    void set_hermitian(bool h) noexcept { hermitian_ = h; }

    std::span<cplx> component(int c) noexcept {
        return {coeffs_.data() + static_cast<std::size_t>(c) * grid_.modes(), grid_.modes()};
    }
    std::span<const cplx> component(int c) const noexcept {
        return {coeffs_.data() + static_cast<std::size_t>(c) * grid_.modes(), grid_.modes()};
    }
    cplx& at(int c, std::size_t slot) noexcept { return coeffs_[c * grid_.modes() + slot]; }
    const cplx& at(int c, std::size_t slot) const noexcept { return coeffs_[c * grid_.modes() + slot]; }

    std::span<cplx> data() noexcept { return coeffs_; }
    std::span<const cplx> data() const noexcept { return coeffs_; }

    /// l2 norm of all coefficients.
    double norm() const noexcept;
    /// Largest coefficient magnitude.
    double max_abs() const noexcept;
    bool mean_zero() const noexcept;
    bool all_finite() const noexcept;

    /// Largest |u(n) - conj(u(-n))| over all modes and components.
    double hermitian_defect() const noexcept;
    /// Checks the symmetry to `rel_tol` relative to max_abs().
    bool is_hermitian(double rel_tol = 1e-12) const noexcept;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s) noexcept;

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

private:
    GridSpec grid_;
    int components_;
    bool hermitian_;
    std::vector<cplx> coeffs_;
};

/// Point values of a (vector) field at x_j = 2pi j / M, component-major.
class RealField {
public:
    RealField(GridSpec grid, int components = 3);

    const GridSpec& grid() const noexcept { return grid_; }
    int components() const noexcept { return components_; }

    std::span<double> component(int c) noexcept {
        return {values_.data() + static_cast<std::size_t>(c) * grid_.points(), grid_.points()};
    }
    std::span<const double> component(int c) const noexcept {
        return {values_.data() + static_cast<std::size_t>(c) * grid_.points(), grid_.points()};
    }
    double& at(int c, int j0, int j1, int j2) noexcept {
        return values_[c * grid_.points() + grid_.linear(j0, j1, j2)];
    }
    double at(int c, int j0, int j1, int j2) const noexcept {
        return values_[c * grid_.points() + grid_.linear(j0, j1, j2)];
    }
    std::span<double> data() noexcept { return values_; }
    std::span<const double> data() const noexcept { return values_; }

    /// Fills every component from f(component, x0, x1, x2).
    template <class F>
    void fill(F&& f) {
        const int m = grid_.size();
        const double h = grid_.spacing();
        for (int c = 0; c < components_; ++c)
            for (int j0 = 0; j0 < m; ++j0)
                for (int j1 = 0; j1 < m; ++j1)
                    for (int j2 = 0; j2 < m; ++j2) at(c, j0, j1, j2) = f(c, j0 * h, j1 * h, j2 * h);
    }

private:
    GridSpec grid_;
    int components_;
    std::vector<double> values_;
};

}  // namespace rns
