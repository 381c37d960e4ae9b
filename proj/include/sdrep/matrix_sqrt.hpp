#pragma once

#include "sdrep/check.hpp"
#include "sdrep/spin_density.hpp"

namespace sdrep {

/// Pointwise PSD square root  sqrt(R) = [[r_up, s], [conj(s), r_dn]].
struct SqrtField {
  ScalarField r_up;
  ScalarField r_dn;
  ComplexField s;

  const Grid3& grid() const { return r_up.grid(); }
};

/// Eigenvalue densities rho_plus >= rho_minus >= 0 of R.
struct EigenDensities {
  ScalarField rho_plus;
  ScalarField rho_minus;
};

/// Below kSqrtFloorRel * max(rho) the quantity rho + 2 sqrt(det) is treated
/// as zero and sqrt(R) vanishes there.
inline constexpr double kSqrtFloorRel = 1e-14;

/// Closed-form square root of a 2x2 PSD matrix at one point:
///   r_up = (rho_up + d) / sqrt(rho + 2d), r_dn = (rho_dn + d) / sqrt(rho + 2d),
///   s = sigma / sqrt(rho + 2d),  with d = sqrt(det R).
struct PointSqrt {
  double r_up, r_dn;
  cplx s;
};
PointSqrt sqrt_point(double rho_up, double rho_dn, cplx sigma, double sqrt_det, double floor);

/// Throws PreconditionError if R fails conditions (a) or (b) of check().
SqrtField sqrt_field(const SpinDensityField& r, const ToleranceConfig& tol = {});

/// Eigenvalues through the square root: the roots of
///   x^2 - (r_up + r_dn) x + (r_up r_dn - |s|^2)
/// are sqrt(rho_plus), sqrt(rho_minus), i.e.
///   sqrt(rho_pm) = (r_up + r_dn +- sqrt(Delta)) / 2,  Delta = (r_up - r_dn)^2 + 4|s|^2.
EigenDensities eigen_densities(const SpinDensityField& r, const ToleranceConfig& tol = {});
EigenDensities eigen_densities(const SqrtField& root);

/// H1 proxies int |grad sqrt(rho_pm)|^2, finite and (with a refined field)
/// refinement-stable under the same policy as check().
ConditionResult corollary_check(const SpinDensityField& r, const ToleranceConfig& tol = {});
ConditionResult corollary_check(const SpinDensityField& r, const SpinDensityField& refined,
                                const ToleranceConfig& tol = {});

/// sqrt(R) * sqrt(R) as a spin density (for round-trip checks).
SpinDensityField square(const SqrtField& root, int n_electrons);

}  // namespace sdrep
