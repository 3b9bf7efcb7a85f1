#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "rns/kernels.hpp"

using rns::kernels::cplx;
using rns::kernels::KernelTable;

namespace {

std::vector<double> randoms(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

std::vector<cplx> crandoms(std::size_t n, std::uint64_t seed) {
    auto re = randoms(2 * n, seed);
    std::vector<cplx> v(n);
    std::memcpy(v.data(), re.data(), re.size() * sizeof(double));
    return v;
}

bool same_bits(const double* a, const double* b, std::size_t n) { return std::memcmp(a, b, n * sizeof(double)) == 0; }

void check_equivalent(const KernelTable& ref, const KernelTable& alt) {
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 1001u}) {
        CAPTURE(n);
        const auto a = randoms(n, 1 + n);
        const auto b = randoms(n, 2 + n);
        const auto c = randoms(n, 3 + n);
        const auto z = crandoms(n, 4 + n);

        auto z1 = z, z2 = z;
        ref.scale_by_real(z1.data(), a.data(), n);
        alt.scale_by_real(z2.data(), a.data(), n);
        CHECK(same_bits(reinterpret_cast<double*>(z1.data()), reinterpret_cast<double*>(z2.data()), 2 * n));

        std::vector<cplx> o1(n), o2(n);
        ref.scaled_copy(o1.data(), z.data(), b.data(), n);
        alt.scaled_copy(o2.data(), z.data(), b.data(), n);
        CHECK(same_bits(reinterpret_cast<double*>(o1.data()), reinterpret_cast<double*>(o2.data()), 2 * n));

        auto y1 = a, y2 = a;
        ref.axpy(y1.data(), -0.37, b.data(), n);
        alt.axpy(y2.data(), -0.37, b.data(), n);
        CHECK(same_bits(y1.data(), y2.data(), n));

        std::vector<double> m1(n), m2(n);
        ref.multiply(m1.data(), a.data(), b.data(), n);
        alt.multiply(m2.data(), a.data(), b.data(), n);
        CHECK(same_bits(m1.data(), m2.data(), n));

        auto acc1 = c, acc2 = c;
        ref.multiply_add(acc1.data(), a.data(), b.data(), n);
        alt.multiply_add(acc2.data(), a.data(), b.data(), n);
        CHECK(same_bits(acc1.data(), acc2.data(), n));

        ref.magnitude_squared(m1.data(), a.data(), b.data(), c.data(), n);
        alt.magnitude_squared(m2.data(), a.data(), b.data(), c.data(), n);
        CHECK(same_bits(m1.data(), m2.data(), n));

        CHECK(ref.sum_squares(a.data(), n) == alt.sum_squares(a.data(), n));
        CHECK(ref.sum(a.data(), n) == alt.sum(a.data(), n));
        auto w = randoms(n, 9 + n);
        for (double& x : w) x = std::abs(x);
        CHECK(ref.weighted_norm_squared(z.data(), w.data(), n) == alt.weighted_norm_squared(z.data(), w.data(), n));
    }
}

}  // namespace

TEST_CASE("scalar reductions agree with naive sums") {
    const auto& k = rns::kernels::scalar_table();
    const auto a = randoms(1003, 11);
    double naive = 0.0, naive_sq = 0.0;
    for (double x : a) {
        naive += x;
        naive_sq += x * x;
    }
    CHECK(k.sum(a.data(), a.size()) == doctest::Approx(naive).epsilon(1e-13));
    CHECK(k.sum_squares(a.data(), a.size()) == doctest::Approx(naive_sq).epsilon(1e-13));

    const auto z = crandoms(77, 12);
    std::vector<double> w(77, 2.5);
    double naive_w = 0.0;
    for (const cplx& c : z) naive_w += 2.5 * std::norm(c);
    CHECK(k.weighted_norm_squared(z.data(), w.data(), z.size()) == doctest::Approx(naive_w).epsilon(1e-13));
}

TEST_CASE("avx2 kernels are bitwise equivalent to the scalar reference") {
    const KernelTable* avx2 = rns::kernels::avx2_table();
    if (avx2 == nullptr || !rns::kernels::cpu_has_avx2()) {
        MESSAGE("AVX2 variant unavailable on this machine; skipping");
        return;
    }
    check_equivalent(rns::kernels::scalar_table(), *avx2);
}

TEST_CASE("active table is one of the compiled variants") {
    const auto& active = rns::kernels::active();
    const bool known = &active == &rns::kernels::scalar_table() || &active == rns::kernels::avx2_table();
    CHECK(known);
}
