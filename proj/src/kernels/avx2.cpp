// Compiled with -mavx2 only (no FMA, no contraction) so elementwise results
// match the scalar reference exactly.
#include "kernels_impl.hpp"

#include "rns/kernels.hpp"

#if defined(RNS_HAVE_AVX2)
#include <immintrin.h>

namespace rns::kernels {
namespace {

// [f0, f1] -> [f0, f0, f1, f1]
inline __m256d duplicate_pairs(const double* f) {
    const __m128d lo = _mm_loadu_pd(f);
    return _mm256_permute4x64_pd(_mm256_castpd128_pd256(lo), 0b01010000);
}

void scale_by_real(cplx* data, const double* factor, std::size_t n) {
    auto* d = reinterpret_cast<double*>(data);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d v = _mm256_loadu_pd(d + 2 * k);
        _mm256_storeu_pd(d + 2 * k, _mm256_mul_pd(v, duplicate_pairs(factor + k)));
    }
    for (; k < n; ++k) {
        d[2 * k] *= factor[k];
        d[2 * k + 1] *= factor[k];
    }
}

void scaled_copy(cplx* out, const cplx* in, const double* factor, std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    const auto* i = reinterpret_cast<const double*>(in);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d v = _mm256_loadu_pd(i + 2 * k);
        _mm256_storeu_pd(o + 2 * k, _mm256_mul_pd(duplicate_pairs(factor + k), v));
    }
    for (; k < n; ++k) {
        o[2 * k] = factor[k] * i[2 * k];
        o[2 * k + 1] = factor[k] * i[2 * k + 1];
    }
}

void axpy(double* y, double a, const double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + k));
        _mm256_storeu_pd(y + k, _mm256_add_pd(_mm256_loadu_pd(y + k), prod));
    }
    for (; k < n; ++k) y[k] += a * x[k];
}

void multiply(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4)
        _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
    for (; k < n; ++k) out[k] = a[k] * b[k];
}

void multiply_add(double* acc, const double* a, const double* b, std::size_t n) {
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
        _mm256_storeu_pd(acc + k, _mm256_add_pd(_mm256_loadu_pd(acc + k), prod));
    }
    for (; k < n; ++k) acc[k] += a[k] * b[k];
}

void magnitude_squared(double* out, const double* x, const double* y, const double* z,
                       std::size_t n) {
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d vx = _mm256_loadu_pd(x + k);
        const __m256d vy = _mm256_loadu_pd(y + k);
        const __m256d vz = _mm256_loadu_pd(z + k);
        const __m256d s = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(vx, vx), _mm256_mul_pd(vy, vy)),
                                        _mm256_mul_pd(vz, vz));
        _mm256_storeu_pd(out + k, s);
    }
    for (; k < n; ++k) out[k] = x[k] * x[k] + y[k] * y[k] + z[k] * z[k];
}

inline double finish(__m256d lanes, const double* tail, std::size_t count, bool square) {
    alignas(32) double acc[4];
    _mm256_store_pd(acc, lanes);
    for (std::size_t j = 0; j < count; ++j) acc[j] += square ? tail[j] * tail[j] : tail[j];
    return combine_lanes(acc);
}

double sum_squares(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d v = _mm256_loadu_pd(x + k);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    return finish(acc, x + k, n - k, true);
}

double sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + k));
    return finish(acc, x + k, n - k, false);
}

double weighted_norm_squared(const cplx* c, const double* w, std::size_t n) {
    const auto* d = reinterpret_cast<const double*>(c);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d a = _mm256_loadu_pd(d + 2 * k);      // re0 im0 re1 im1
        const __m256d b = _mm256_loadu_pd(d + 2 * k + 4);  // re2 im2 re3 im3
        // hadd -> |c0|^2 |c2|^2 |c1|^2 |c3|^2, then restore natural order
        const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
        const __m256d mag = _mm256_permute4x64_pd(h, 0b11011000);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + k), mag));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    for (std::size_t j = 0; k < n; ++k, ++j) {
        const double re = d[2 * k];
        const double im = d[2 * k + 1];
        lanes[j] += w[k] * (re * re + im * im);
    }
    return combine_lanes(lanes);
}

constexpr KernelTable kAvx2{
    "avx2",      scale_by_real, scaled_copy, axpy, multiply, multiply_add, magnitude_squared,
    sum_squares, sum,           weighted_norm_squared,
};

}  // namespace

const KernelTable* avx2_table() noexcept { return &kAvx2; }

}  // namespace rns::kernels

#else

namespace rns::kernels {
const KernelTable* avx2_table() noexcept { return nullptr; }
}  // namespace rns::kernels

#endif
