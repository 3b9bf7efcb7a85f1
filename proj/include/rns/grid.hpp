#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace rns {

using Wavevector = std::array<int, 3>;

/// Per-grid lookup tables, built once per size and shared.
struct ModeTable {
    std::vector<Wavevector> wavevector;   ///< n for each storage slot
    std::vector<double> k2;               ///< |n|^2
    std::vector<double> kmag;             ///< |n|
    std::vector<std::uint32_t> conjugate; ///< storage slot of -n
    std::vector<std::uint8_t> nyquist;    ///< 1 if some |n_i| == M/2
    std::vector<std::uint8_t> dealiased;  ///< 1 if 3|n_i| < M on every axis
    /// Wavevector seen by derivatives: Nyquist coordinates are set to 0, since
    /// sin(M x / 2) vanishes on the grid. Odd under n -> -n on every slot.
    std::vector<Wavevector> derivative;
    std::vector<double> derivative_k2;
};

/// Periodic box [0, 2pi)^3 sampled with M points per axis. Frequencies are
/// the integers -M/2 < n_i <= M/2 in standard FFT storage order.
class GridSpec {
public:
    explicit GridSpec(int points_per_axis);

    int size() const noexcept { return m_; }
    std::size_t points() const noexcept { return static_cast<std::size_t>(m_) * m_ * m_; }
    /// Number of lattice modes, equal to points().
    std::size_t modes() const noexcept { return points(); }
    double spacing() const noexcept;
    /// Volume of one quadrature cell, (2pi/M)^3.
    double cell_volume() const noexcept;

    /// Signed frequency stored at axis index i.
    int frequency(int index) const noexcept { return index <= m_ / 2 ? index : index - m_; }
    /// Axis index for a signed frequency (any integer, reduced mod M).
    int index_of(int frequency) const noexcept { return ((frequency % m_) + m_) % m_; }

    std::size_t linear(int i0, int i1, int i2) const noexcept {
        return (static_cast<std::size_t>(i0) * m_ + i1) * m_ + i2;
    }
    /// Storage slot holding wavevector n, which must lie in the frequency set.
    std::size_t slot(const Wavevector& n) const noexcept {
        return linear(index_of(n[0]), index_of(n[1]), index_of(n[2]));
    }
    bool contains(const Wavevector& n) const noexcept;

    /// Storage slot of the mean mode n = 0.
    static constexpr std::size_t mean_slot() noexcept { return 0; }

    const ModeTable& table() const noexcept { return *table_; }

    /// Largest |n_i| kept by the two-thirds rule.
    int dealias_limit() const noexcept { return (m_ - 1) / 3; }

    friend bool operator==(const GridSpec& a, const GridSpec& b) noexcept { return a.m_ == b.m_; }

private:
    int m_;
    std::shared_ptr<const ModeTable> table_;
};

/// Throws GridMismatch unless both grids have the same size.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

}  // namespace rns
