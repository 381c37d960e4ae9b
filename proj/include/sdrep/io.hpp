#pragma once

// SPDF density files and witness directories.
//
// SPDF: text header
//   spdf 1
//   grid nx ny nz
//   box x0 y0 z0 x1 y1 z1
//   electrons N
//   data
// then rho_up, rho_dn, sigma_re, sigma_im as little-endian float64, each
// nx*ny*nz long, C order with iz fastest.

#include <filesystem>
#include <iosfwd>

#include "sdrep/matrix_sqrt.hpp"
#include "sdrep/spin_density.hpp"
#include "sdrep/witness.hpp"

namespace sdrep {

void write_spdf(const SpinDensityField& r, std::ostream& out);
void write_spdf(const SpinDensityField& r, const std::filesystem::path& path);
SpinDensityField read_spdf(std::istream& in);
SpinDensityField read_spdf(const std::filesystem::path& path);

/// Square root stored in an SPDF container: r_up, r_dn, Re s, Im s.
SpinDensityField sqrt_as_spdf(const SqrtField& root, int n);

/// Writes witness.txt plus one file per orbital and one phase file per
/// branch. Creates the directory if needed.
void write_witness(const Witness& w, const std::filesystem::path& dir);
Witness read_witness(const std::filesystem::path& dir);

}  // namespace sdrep
