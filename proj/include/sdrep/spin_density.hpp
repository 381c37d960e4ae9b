#pragma once

#include <utility>
#include <vector>

#include "sdrep/field.hpp"

namespace sdrep {

/// Field of Hermitian 2x2 spin-density matrices
///   R(x) = [[rho_up, sigma], [conj(sigma), rho_dn]]
/// sigma is stored once; the lower triangle is implied.
///
/// Positivity, the determinant condition and normalization are not enforced
/// here: deciding them is the checker's job.
struct SpinDensityField {
  ScalarField rho_up;
  ScalarField rho_dn;
  ComplexField sigma;
  int n_electrons = 0;

  SpinDensityField(ScalarField up, ScalarField dn, ComplexField sig, int n);

  /// All-zero field.
  SpinDensityField(const Grid3& grid, int n);

  const Grid3& grid() const { return rho_up.grid(); }

  /// rho = rho_up + rho_dn.
  ScalarField total() const;
  double max_total() const;

  SpinDensityField scaled(double c) const;
};

/// Round-off clamp on the determinant, relative to max(rho)^2.
inline constexpr double kDetClampRel = 1e-12;

/// Pointwise rho_up*rho_dn - |sigma|^2. Negative values no larger than
/// kDetClampRel * max(rho)^2 in magnitude are clamped to zero; larger
/// negatives are kept as genuine violations.
ScalarField det_field(const SpinDensityField& r);

/// sqrt of the clamped determinant, with values that are round-off relative
/// to the local scale (det <= kDetClampRel * rho(x)^2) set to zero. Genuine
/// negatives map to zero as well; the checker reports them separately.
ScalarField sqrt_det_field(const SpinDensityField& r);

/// Integral of tr R.
double trace_integral(const SpinDensityField& r);

/// Exchange spin labels: (rho_up, rho_dn, sigma) -> (rho_dn, rho_up, conj(sigma)).
SpinDensityField spin_swap(const SpinDensityField& r);

/// Weighted sum of fields on one grid. Weights must be non-negative and sum
/// to one within 1e-12.
SpinDensityField convex_combine(const std::vector<std::pair<double, SpinDensityField>>& parts);

}  // namespace sdrep
