#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rns/manifest.hpp"
#include "rns/spectral_field.hpp"

namespace rns {

/// Counter-based generator: every value is a pure function of (seed, counter).
namespace rng {

inline constexpr const char* kHashName = "splitmix64-keyed-counter";
inline constexpr const char* kTransformName = "box-muller-cos";

std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) noexcept;
/// Uniform on the open interval (0, 1), 53-bit resolution.
double uniform(std::uint64_t seed, std::uint64_t counter) noexcept;
/// Standard normal number k of stream `seed`, from uniforms 2k and 2k+1.
double gaussian(std::uint64_t seed, std::uint64_t k) noexcept;
/// Independent sub-stream seed, e.g. for ensemble member `index`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace rng

/// Conjugate pairing {n, -n} of a grid. The representative of a pair is its
/// lexicographically positive member, which is also the smaller storage slot.
struct PairIndex {
    static constexpr std::uint32_t kNone = 0xffffffffu;
    std::vector<std::uint32_t> pair_of_slot;  ///< kNone for the mean mode
    std::vector<std::uint32_t> representative;
    std::size_t pairs() const noexcept { return representative.size(); }

    static std::shared_ptr<const PairIndex> of(const GridSpec& grid);
};

struct RandomDraw {
    GridSpec grid;
    std::uint64_t master_seed = 0;
    std::shared_ptr<const PairIndex> pairing;
    std::vector<double> values;  ///< one h per pair

    double at_slot(std::size_t slot) const noexcept {
        const auto k = pairing->pair_of_slot[slot];
        return k == PairIndex::kNone ? 0.0 : values[k];
    }
};

enum class FamilyKind { band_limited, power_law };

struct DataFamily {
    FamilyKind kind = FamilyKind::band_limited;
    double gamma = 2.0;           ///< power_law decay |n|^{-gamma}
    double support_radius = 1.0;  ///< band_limited: modes with 0 < |n| <= radius
    double amplitude = 1.0;
};

std::string to_string(FamilyKind kind);
FamilyKind parse_family_kind(const std::string& name);

struct GeneratedData {
    SpectralField field;
    double negative_norm;      ///< ||f||_{H^{-alpha}}
    bool representative;       ///< false when 2(alpha + gamma) <= 3
    std::string warning;
};

/// Deterministic divergence-free mean-zero data. Nyquist planes are left
/// empty. Throws InvalidFamily for malformed parameters.
GeneratedData make_data(const GridSpec& grid, const DataFamily& family, double alpha, std::uint64_t seed);

RandomDraw draw_gaussians(const GridSpec& grid, std::uint64_t master_seed);

struct RandomizedData {
    SpectralField base;
    RandomDraw draw;
    SpectralField randomized;
};

/// f^w(n) = h_{pair(n)} f(n). The mean mode is passed through.
SpectralField randomize_field(const SpectralField& f, const RandomDraw& draw);
RandomizedData randomize(const SpectralField& f, const RandomDraw& draw);

/// sum_i c_i h_i over the first c.size() values of the draw.
double weighted_gaussian_sum(std::span<const double> c, const RandomDraw& draw);

/// Records family, alpha, seed, generator identifiers and grid size.
void record_randomization(Manifest& manifest, const GridSpec& grid, const DataFamily& family, double alpha,
                          std::uint64_t master_seed);

}  // namespace rns
