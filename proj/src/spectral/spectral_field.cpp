#include "rns/spectral_field.hpp"

#include <algorithm>
#include <cmath>

#include "rns/error.hpp"
#include "rns/kernels.hpp"

namespace rns {

SpectralField::SpectralField(GridSpec grid, int components, bool hermitian)
    : grid_(std::move(grid)),
      components_(components),
      hermitian_(hermitian),
      coeffs_(static_cast<std::size_t>(components) * grid_.modes()) {}

double SpectralField::norm() const noexcept { return std::sqrt(kernels::sum_squares(data())); }

double SpectralField::max_abs() const noexcept {
    double m = 0.0;
    for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

bool SpectralField::mean_zero() const noexcept {
    for (int c = 0; c < components_; ++c)
        if (at(c, GridSpec::mean_slot()) != cplx{}) return false;
    return true;
}

bool SpectralField::all_finite() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const cplx& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

double SpectralField::hermitian_defect() const noexcept {
    const auto& conj_slot = grid_.table().conjugate;
    double defect = 0.0;
    for (int c = 0; c < components_; ++c) {
        const auto comp = component(c);
        for (std::size_t s = 0; s < comp.size(); ++s)
            defect = std::max(defect, std::abs(comp[s] - std::conj(comp[conj_slot[s]])));
    }
    return defect;
}

bool SpectralField::is_hermitian(double rel_tol) const noexcept {
    const double scale = max_abs();
    if (scale == 0.0) return true;
    return hermitian_defect() <= rel_tol * scale;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_same_grid(grid_, other.grid_, "SpectralField::operator+=");
    if (components_ != other.components_) throw Error(ErrorCode::GridMismatch, "component count differs");
    kernels::axpy(data(), 1.0, other.data());
    hermitian_ = hermitian_ && other.hermitian_;
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_same_grid(grid_, other.grid_, "SpectralField::operator-=");
    if (components_ != other.components_) throw Error(ErrorCode::GridMismatch, "component count differs");
    kernels::axpy(data(), -1.0, other.data());
    hermitian_ = hermitian_ && other.hermitian_;
    return *this;
}

SpectralField& SpectralField::operator*=(double s) noexcept {
    for (cplx& c : coeffs_) c *= s;
    return *this;
}

RealField::RealField(GridSpec grid, int components)
    : grid_(std::move(grid)), components_(components), values_(static_cast<std::size_t>(components) * grid_.points()) {}

}  // namespace rns
