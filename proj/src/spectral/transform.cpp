#include "rns/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "rns/error.hpp"

namespace rns {
namespace fft {
namespace {

// FFTW_ESTIMATE keeps plan selection deterministic, so repeated runs produce
// bitwise-identical output.
constexpr unsigned kPlannerFlags = FFTW_ESTIMATE;

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

struct Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    ~Plans() {
        if (r2c) fftw_destroy_plan(r2c);
        if (c2r) fftw_destroy_plan(c2r);
    }
};

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::size_t half_size(int m) { return static_cast<std::size_t>(m) * m * (m / 2 + 1); }

// Plans are shared; execution goes through the new-array interface on
// fftw_malloc'd scratch, which FFTW documents as thread-safe.
const Plans& plans_for(int m) {
    static std::map<int, std::unique_ptr<Plans>> cache;
    std::lock_guard lock(planner_mutex());
    auto& slot = cache[m];
    if (!slot) {
        slot = std::make_unique<Plans>();
        const std::size_t n = static_cast<std::size_t>(m) * m * m;
        std::unique_ptr<double, FftwFree> real(fftw_alloc_real(n));
        std::unique_ptr<fftw_complex, FftwFree> spec(fftw_alloc_complex(half_size(m)));
        slot->r2c = fftw_plan_dft_r2c_3d(m, m, m, real.get(), spec.get(), kPlannerFlags);
        slot->c2r = fftw_plan_dft_c2r_3d(m, m, m, spec.get(), real.get(), kPlannerFlags);
    }
    return *slot;
}

struct Scratch {
    std::unique_ptr<double, FftwFree> real;
    std::unique_ptr<fftw_complex, FftwFree> spec;
};

Scratch& scratch_for(int m) {
    thread_local std::map<int, Scratch> buffers;
    auto& s = buffers[m];
    if (!s.real) {
        s.real.reset(fftw_alloc_real(static_cast<std::size_t>(m) * m * m));
        s.spec.reset(fftw_alloc_complex(half_size(m)));
    }
    return s;
}

double forward_scale(int m) {
    const double n = double(m) * m * m;
    return std::pow(2.0 * std::numbers::pi, 1.5) / n;
}

double inverse_scale() { return std::pow(2.0 * std::numbers::pi, -1.5); }

}  // namespace

void forward(const GridSpec& grid, std::span<const double> values, std::span<std::complex<double>> full) {
    const int m = grid.size();
    const Plans& p = plans_for(m);
    Scratch& s = scratch_for(m);
    std::memcpy(s.real.get(), values.data(), grid.points() * sizeof(double));
    fftw_execute_dft_r2c(p.r2c, s.real.get(), s.spec.get());

    const double scale = forward_scale(m);
    const int h = m / 2 + 1;
    const auto* half = reinterpret_cast<const std::complex<double>*>(s.spec.get());
    for (int i0 = 0; i0 < m; ++i0)
        for (int i1 = 0; i1 < m; ++i1) {
            const std::complex<double>* row = half + (static_cast<std::size_t>(i0) * m + i1) * h;
            std::complex<double>* out = full.data() + grid.linear(i0, i1, 0);
            for (int i2 = 0; i2 < h; ++i2) out[i2] = scale * row[i2];
            const int c0 = (m - i0) % m;
            const int c1 = (m - i1) % m;
            const std::complex<double>* mirror = half + (static_cast<std::size_t>(c0) * m + c1) * h;
            for (int i2 = h; i2 < m; ++i2) out[i2] = scale * std::conj(mirror[m - i2]);
        }
}

void inverse(const GridSpec& grid, std::span<const std::complex<double>> full, std::span<double> values) {
    const int m = grid.size();
    const Plans& p = plans_for(m);
    Scratch& s = scratch_for(m);
    const int h = m / 2 + 1;
    auto* half = reinterpret_cast<std::complex<double>*>(s.spec.get());
    for (int i0 = 0; i0 < m; ++i0)
        for (int i1 = 0; i1 < m; ++i1)
            std::memcpy(half + (static_cast<std::size_t>(i0) * m + i1) * h, full.data() + grid.linear(i0, i1, 0),
                        h * sizeof(std::complex<double>));
    fftw_execute_dft_c2r(p.c2r, s.spec.get(), s.real.get());
    const double scale = inverse_scale();
    const double* r = s.real.get();
    for (std::size_t k = 0; k < grid.points(); ++k) values[k] = scale * r[k];
}

std::size_t half_modes(const GridSpec& grid) noexcept { return half_size(grid.size()); }

const std::vector<std::uint32_t>& half_slots(const GridSpec& grid) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<std::vector<std::uint32_t>>> cache;
    std::lock_guard lock(mutex);
    auto& entry = cache[grid.size()];
    if (!entry) {
        const int m = grid.size();
        const int h = m / 2 + 1;
        entry = std::make_unique<std::vector<std::uint32_t>>();
        entry->reserve(half_size(m));
        for (int i0 = 0; i0 < m; ++i0)
            for (int i1 = 0; i1 < m; ++i1)
                for (int i2 = 0; i2 < h; ++i2) entry->push_back(static_cast<std::uint32_t>(grid.linear(i0, i1, i2)));
    }
    return *entry;
}

void inverse_from_half(const GridSpec& grid, std::span<const std::complex<double>> half, std::span<double> values) {
    const int m = grid.size();
    const Plans& p = plans_for(m);
    Scratch& s = scratch_for(m);
    std::memcpy(s.spec.get(), half.data(), half_size(m) * sizeof(std::complex<double>));
    fftw_execute_dft_c2r(p.c2r, s.spec.get(), s.real.get());
    const double scale = inverse_scale();
    const double* r = s.real.get();
    for (std::size_t k = 0; k < grid.points(); ++k) values[k] = scale * r[k];
}

const char* backend_name() noexcept { return "fftw3-r2c-estimate"; }

}  // namespace fft

SpectralField forward_transform(const RealField& f) {
    SpectralField out(f.grid(), f.components(), true);
    for (int c = 0; c < f.components(); ++c) fft::forward(f.grid(), f.component(c), out.component(c));
    return out;
}

RealField inverse_transform(const SpectralField& F) {
    if (!F.is_hermitian(1e-12))
        throw Error(ErrorCode::NonHermitianInput,
                    "inverse_transform requires conj(u(n)) == u(-n); defect " + std::to_string(F.hermitian_defect()));
    RealField out(F.grid(), F.components());
    for (int c = 0; c < F.components(); ++c) fft::inverse(F.grid(), F.component(c), out.component(c));
    return out;
}

}  // namespace rns
