#include "kernels_impl.hpp"

#include "rns/kernels.hpp"

namespace rns::kernels {
namespace {

void scale_by_real(cplx* data, const double* factor, std::size_t n) {
    auto* d = reinterpret_cast<double*>(data);
    for (std::size_t k = 0; k < n; ++k) {
        d[2 * k] *= factor[k];
        d[2 * k + 1] *= factor[k];
    }
}

void scaled_copy(cplx* out, const cplx* in, const double* factor, std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    const auto* i = reinterpret_cast<const double*>(in);
    for (std::size_t k = 0; k < n; ++k) {
        o[2 * k] = factor[k] * i[2 * k];
        o[2 * k + 1] = factor[k] * i[2 * k + 1];
    }
}

void axpy(double* y, double a, const double* x, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

void multiply(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * b[k];
}

void multiply_add(double* acc, const double* a, const double* b, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) acc[k] += a[k] * b[k];
}

void magnitude_squared(double* out, const double* x, const double* y, const double* z,
                       std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out[k] = x[k] * x[k] + y[k] * y[k] + z[k] * z[k];
}

// Reductions keep four interleaved partial sums so that they match the
// vector lanes of the AVX2 variant bit for bit.
double sum_squares(const double* x, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4)
        for (int j = 0; j < 4; ++j) acc[j] += x[k + j] * x[k + j];
    for (int j = 0; k < n; ++k, ++j) acc[j] += x[k] * x[k];
    return combine_lanes(acc);
}

double sum(const double* x, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4)
        for (int j = 0; j < 4; ++j) acc[j] += x[k + j];
    for (int j = 0; k < n; ++k, ++j) acc[j] += x[k];
    return combine_lanes(acc);
}

double weighted_norm_squared(const cplx* c, const double* w, std::size_t n) {
    const auto* d = reinterpret_cast<const double*>(c);
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        for (int j = 0; j < 4; ++j) {
            const double re = d[2 * (k + j)];
            const double im = d[2 * (k + j) + 1];
            acc[j] += w[k + j] * (re * re + im * im);
        }
    }
    for (int j = 0; k < n; ++k, ++j) {
        const double re = d[2 * k];
        const double im = d[2 * k + 1];
        acc[j] += w[k] * (re * re + im * im);
    }
    return combine_lanes(acc);
}

constexpr KernelTable kScalar{
    "scalar",      scale_by_real, scaled_copy,   axpy, multiply, multiply_add, magnitude_squared,
    sum_squares,   sum,           weighted_norm_squared,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace rns::kernels
