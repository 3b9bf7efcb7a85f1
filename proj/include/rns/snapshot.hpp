#pragma once

#include <filesystem>
#include <iosfwd>

#include "rns/spectral_field.hpp"

namespace rns {

// RNS1 snapshot layout (all little-endian):
//   "RNS1" | u32 M | u8 components | components x M^3 x (f64 re, f64 im)
// Components are stored one after another, modes in FFT order.

void write_snapshot(std::ostream& out, const SpectralField& F);
SpectralField read_snapshot(std::istream& in);

void write_snapshot(const std::filesystem::path& path, const SpectralField& F);
SpectralField read_snapshot(const std::filesystem::path& path);

}  // namespace rns
