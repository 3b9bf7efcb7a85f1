#include "rns/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "rns/error.hpp"

namespace rns {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put_le(std::ostream& out, T value) {
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
    std::array<char, sizeof(T)> bytes;
    if (!in.read(bytes.data(), bytes.size())) throw Error(ErrorCode::IoError, "truncated RNS1 snapshot");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const SpectralField& F) {
    out.write("RNS1", 4);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(F.grid().size()));
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(F.components()));
    for (const cplx& c : F.data()) {
        put_le<double>(out, c.real());
        put_le<double>(out, c.imag());
    }
    if (!out) throw Error(ErrorCode::IoError, "failed writing RNS1 snapshot");
}

SpectralField read_snapshot(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "RNS1", 4) != 0)
        throw Error(ErrorCode::IoError, "not an RNS1 snapshot");
    const auto m = get_le<std::uint32_t>(in);
    const auto components = get_le<std::uint8_t>(in);
    if (components == 0) throw Error(ErrorCode::IoError, "RNS1 snapshot with zero components");
    SpectralField F(GridSpec(static_cast<int>(m)), components, true);
    for (cplx& c : F.data()) {
        const double re = get_le<double>(in);
        const double im = get_le<double>(in);
        c = {re, im};
    }
    F.set_hermitian(F.is_hermitian(1e-12));
    return F;
}

void write_snapshot(const std::filesystem::path& path, const SpectralField& F) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    write_snapshot(out, F);
}

SpectralField read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return read_snapshot(in);
}

}  // namespace rns
