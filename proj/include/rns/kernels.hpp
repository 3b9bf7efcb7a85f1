#pragma once

// Data-parallel inner loops shared by the spectral operators, the norms and
// the time stepper. Every kernel has a scalar reference implementation and an
// AVX2 variant; the active table is chosen once at startup from the CPU
// features (override with RNSLAB_SIMD=scalar|avx2).
//
// Elementwise kernels are bitwise identical across variants. Reductions use
// four interleaved partial sums in both variants, so they agree to rounding
// of the final combine only.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace rns::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    std::string_view name;

    /// data[k] *= factor[k]
    void (*scale_by_real)(cplx* data, const double* factor, std::size_t n);
    /// out[k] = factor[k] * in[k]
    void (*scaled_copy)(cplx* out, const cplx* in, const double* factor, std::size_t n);
    /// y[k] += a * x[k] over raw doubles
    void (*axpy)(double* y, double a, const double* x, std::size_t n);
    /// out[k] = a[k] * b[k]
    void (*multiply)(double* out, const double* a, const double* b, std::size_t n);
    /// acc[k] += a[k] * b[k]
    void (*multiply_add)(double* acc, const double* a, const double* b, std::size_t n);
    /// out[k] = x[k]^2 + y[k]^2 + z[k]^2
    void (*magnitude_squared)(double* out, const double* x, const double* y, const double* z,
                              std::size_t n);
    /// sum x[k]^2
    double (*sum_squares)(const double* x, std::size_t n);
    /// sum x[k]
    double (*sum)(const double* x, std::size_t n);
    /// sum w[k] * |c[k]|^2
    double (*weighted_norm_squared)(const cplx* c, const double* w, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when the binary was built without AVX2 support.
const KernelTable* avx2_table() noexcept;
bool cpu_has_avx2() noexcept;

/// The table selected for this process.
const KernelTable& active() noexcept;

// Span conveniences over the active table.

inline void scale_by_real(std::span<cplx> data, std::span<const double> factor) {
    active().scale_by_real(data.data(), factor.data(), data.size());
}
inline void scaled_copy(std::span<cplx> out, std::span<const cplx> in,
                        std::span<const double> factor) {
    active().scaled_copy(out.data(), in.data(), factor.data(), out.size());
}
inline void axpy(std::span<cplx> y, double a, std::span<const cplx> x) {
    active().axpy(reinterpret_cast<double*>(y.data()), a,
                  reinterpret_cast<const double*>(x.data()), 2 * y.size());
}
inline void axpy(std::span<double> y, double a, std::span<const double> x) {
    active().axpy(y.data(), a, x.data(), y.size());
}
inline void multiply(std::span<double> out, std::span<const double> a, std::span<const double> b) {
    active().multiply(out.data(), a.data(), b.data(), out.size());
}
inline void multiply_add(std::span<double> acc, std::span<const double> a,
                         std::span<const double> b) {
    active().multiply_add(acc.data(), a.data(), b.data(), acc.size());
}
inline void magnitude_squared(std::span<double> out, std::span<const double> x,
                              std::span<const double> y, std::span<const double> z) {
    active().magnitude_squared(out.data(), x.data(), y.data(), z.data(), out.size());
}
inline double sum_squares(std::span<const double> x) { return active().sum_squares(x.data(), x.size()); }
inline double sum_squares(std::span<const cplx> x) {
    return active().sum_squares(reinterpret_cast<const double*>(x.data()), 2 * x.size());
}
inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double weighted_norm_squared(std::span<const cplx> c, std::span<const double> w) {
    return active().weighted_norm_squared(c.data(), w.data(), c.size());
}

}  // namespace rns::kernels
