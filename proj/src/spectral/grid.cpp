#include "rns/grid.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "rns/error.hpp"

namespace rns {
namespace {

std::shared_ptr<const ModeTable> build_table(int m) {
    auto t = std::make_shared<ModeTable>();
    const std::size_t n = static_cast<std::size_t>(m) * m * m;
    t->wavevector.resize(n);
    t->k2.resize(n);
    t->kmag.resize(n);
    t->conjugate.resize(n);
    t->nyquist.resize(n);
    t->dealiased.resize(n);
    t->derivative.resize(n);
    t->derivative_k2.resize(n);
    const auto freq = [m](int i) { return i <= m / 2 ? i : i - m; };
    const auto reduce = [m](int k) { return ((k % m) + m) % m; };
    const int limit = (m - 1) / 3;
    for (int i0 = 0; i0 < m; ++i0)
        for (int i1 = 0; i1 < m; ++i1)
            for (int i2 = 0; i2 < m; ++i2) {
                const std::size_t s = (static_cast<std::size_t>(i0) * m + i1) * m + i2;
                const Wavevector w{freq(i0), freq(i1), freq(i2)};
                t->wavevector[s] = w;
                const double k2 = double(w[0]) * w[0] + double(w[1]) * w[1] + double(w[2]) * w[2];
                t->k2[s] = k2;
                t->kmag[s] = std::sqrt(k2);
                t->conjugate[s] = static_cast<std::uint32_t>(
                    (static_cast<std::size_t>(reduce(-w[0])) * m + reduce(-w[1])) * m + reduce(-w[2]));
                t->nyquist[s] = (2 * std::abs(w[0]) == m || 2 * std::abs(w[1]) == m ||
                                 2 * std::abs(w[2]) == m);
                t->dealiased[s] =
                    std::abs(w[0]) <= limit && std::abs(w[1]) <= limit && std::abs(w[2]) <= limit;
                Wavevector d = w;
                for (int& c : d)
                    if (2 * std::abs(c) == m) c = 0;
                t->derivative[s] = d;
                t->derivative_k2[s] = double(d[0]) * d[0] + double(d[1]) * d[1] + double(d[2]) * d[2];
            }
    return t;
}

std::shared_ptr<const ModeTable> table_for(int m) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const ModeTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[m];
    if (!slot) slot = build_table(m);
    return slot;
}

}  // namespace

GridSpec::GridSpec(int points_per_axis) : m_(points_per_axis) {
    if (m_ < 4 || m_ % 2 != 0)
        throw Error(ErrorCode::ValidationError,
                    "grid size must be even and >= 4, got " + std::to_string(m_));
    table_ = table_for(m_);
}

double GridSpec::spacing() const noexcept { return 2.0 * std::numbers::pi / m_; }

double GridSpec::cell_volume() const noexcept {
    const double h = spacing();
    return h * h * h;
}

bool GridSpec::contains(const Wavevector& n) const noexcept {
    for (int v : n)
        if (v <= -m_ / 2 || v > m_ / 2) return false;
    return true;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b))
        throw Error(ErrorCode::GridMismatch, std::string(where) + ": grid " + std::to_string(a.size()) +
                                                 " vs " + std::to_string(b.size()));
}

}  // namespace rns
