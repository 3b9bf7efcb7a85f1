#include "rns/random.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "rns/error.hpp"
#include "rns/norms.hpp"
#include "rns/operators.hpp"

namespace rns {
namespace rng {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

std::uint64_t finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) noexcept {
    const std::uint64_t key = finalize(seed + kGolden);
    return finalize(key ^ ((counter + 1) * kGolden));
}

double uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
    return (static_cast<double>(mix(seed, counter) >> 11) + 0.5) * 0x1.0p-53;
}

double gaussian(std::uint64_t seed, std::uint64_t k) noexcept {
    const double u1 = uniform(seed, 2 * k);
    const double u2 = uniform(seed, 2 * k + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix(master ^ 0x5eed5eed5eed5eedull, index);
}

}  // namespace rng

std::shared_ptr<const PairIndex> PairIndex::of(const GridSpec& grid) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const PairIndex>> cache;
    std::lock_guard lock(mutex);
    auto& entry = cache[grid.size()];
    if (entry) return entry;

    auto idx = std::make_shared<PairIndex>();
    const auto& conj = grid.table().conjugate;
    idx->pair_of_slot.assign(grid.modes(), kNone);
    for (std::size_t s = 1; s < grid.modes(); ++s) {
        if (conj[s] < s) continue;
        const auto k = static_cast<std::uint32_t>(idx->representative.size());
        idx->representative.push_back(static_cast<std::uint32_t>(s));
        idx->pair_of_slot[s] = k;
        idx->pair_of_slot[conj[s]] = k;
    }
    entry = std::move(idx);
    return entry;
}

std::string to_string(FamilyKind kind) {
    return kind == FamilyKind::band_limited ? "band_limited" : "power_law";
}

FamilyKind parse_family_kind(const std::string& name) {
    if (name == "band_limited") return FamilyKind::band_limited;
    if (name == "power_law") return FamilyKind::power_law;
    throw Error(ErrorCode::InvalidFamily, "unknown data family '" + name + "'");
}

namespace {

// Real unit vector orthogonal to n: normalized n x a for a fixed axis a,
// switching axis when n is parallel to it.
std::array<double, 3> transverse_direction(const Wavevector& n) {
    const double a[2][3] = {{0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}};
    for (const auto& axis : a) {
        const std::array<double, 3> c{n[1] * axis[2] - n[2] * axis[1], n[2] * axis[0] - n[0] * axis[2],
                                      n[0] * axis[1] - n[1] * axis[0]};
        const double len = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
        if (len > 0.0) return {c[0] / len, c[1] / len, c[2] / len};
    }
    return {0.0, 0.0, 0.0};
}

}  // namespace

GeneratedData make_data(const GridSpec& grid, const DataFamily& family, double alpha, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw Error(ErrorCode::InvalidFamily, "alpha must lie in (0, 1]");
    if (!std::isfinite(family.amplitude)) throw Error(ErrorCode::InvalidFamily, "amplitude must be finite");
    if (family.kind == FamilyKind::band_limited && !(family.support_radius >= 1.0))
        throw Error(ErrorCode::InvalidFamily, "band_limited support radius must be >= 1");
    if (family.kind == FamilyKind::power_law && !std::isfinite(family.gamma))
        throw Error(ErrorCode::InvalidFamily, "power_law gamma must be finite");

    GeneratedData out{SpectralField(grid), 0.0, true, {}};
    if (family.kind == FamilyKind::power_law && 2.0 * (alpha + family.gamma) <= 3.0) {
        out.representative = false;
        out.warning = "InvalidFamily: 2(alpha+gamma) <= 3, the untruncated family is not in H^{-alpha}; "
                      "truncated realization is finite but not representative";
    }

    const auto& table = grid.table();
    const auto pairing = PairIndex::of(grid);
    for (std::size_t k = 0; k < pairing->pairs(); ++k) {
        const std::size_t s = pairing->representative[k];
        if (table.nyquist[s]) continue;
        const double kmag = table.kmag[s];
        double magnitude;
        if (family.kind == FamilyKind::band_limited) {
            if (kmag > family.support_radius) continue;
            magnitude = family.amplitude;
        } else {
            magnitude = family.amplitude * std::pow(kmag, -family.gamma);
        }
        const double phase = 2.0 * std::numbers::pi * rng::uniform(seed, k);
        const cplx c = std::polar(magnitude, phase);
        const auto d = transverse_direction(table.wavevector[s]);
        const std::size_t t = table.conjugate[s];
        for (int i = 0; i < 3; ++i) {
            out.field.at(i, s) = d[i] * c;
            out.field.at(i, t) = d[i] * std::conj(c);
        }
    }
    leray_project_inplace(out.field);
    out.negative_norm = sobolev_norm(out.field, -alpha);
    return out;
}

RandomDraw draw_gaussians(const GridSpec& grid, std::uint64_t master_seed) {
    RandomDraw d{grid, master_seed, PairIndex::of(grid), {}};
    d.values.resize(d.pairing->pairs());
    for (std::size_t k = 0; k < d.values.size(); ++k) d.values[k] = rng::gaussian(master_seed, k);
    return d;
}

SpectralField randomize_field(const SpectralField& f, const RandomDraw& draw) {
    require_same_grid(f.grid(), draw.grid, "randomize");
    SpectralField out = f;
    const auto& pair_of = draw.pairing->pair_of_slot;
    for (int c = 0; c < f.components(); ++c) {
        auto u = out.component(c);
        for (std::size_t s = 1; s < u.size(); ++s) u[s] *= draw.values[pair_of[s]];
    }
    return out;
}

RandomizedData randomize(const SpectralField& f, const RandomDraw& draw) {
    SpectralField r = randomize_field(f, draw);
    return {f, draw, std::move(r)};
}

double weighted_gaussian_sum(std::span<const double> c, const RandomDraw& draw) {
    if (c.size() > draw.values.size())
        throw Error(ErrorCode::DomainError, "coefficient sequence longer than the draw");
    double sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) sum += c[i] * draw.values[i];
    return sum;
}

void record_randomization(Manifest& manifest, const GridSpec& grid, const DataFamily& family, double alpha,
                          std::uint64_t master_seed) {
    manifest.set("grid.M", grid.size());
    manifest.set("data.family", to_string(family.kind));
    if (family.kind == FamilyKind::power_law)
        manifest.set("data.gamma", family.gamma);
    else
        manifest.set("data.support_radius", family.support_radius);
    manifest.set("data.amplitude", family.amplitude);
    manifest.set("data.alpha", alpha);
    manifest.set("random.master_seed", master_seed);
    manifest.set("random.hash", rng::kHashName);
    manifest.set("random.transform", rng::kTransformName);
}

}  // namespace rns
