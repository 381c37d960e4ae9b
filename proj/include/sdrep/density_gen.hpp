#pragma once

// Analytic fixture families with known norms and known representability.
// Gaussians of width a have density (pi a^2)^{-3/2} exp(-|x - c|^2 / a^2).

#include <array>

#include "sdrep/spin_density.hpp"

namespace sdrep {

using Vec3 = std::array<double, 3>;

/// Share of the unit-mass Gaussian density (centre c, width a) outside the box.
double gaussian_mass_outside(const Grid3& grid, const Vec3& c, double a);

/// Throws InvalidArgument when more than 1e-8 of the mass lies outside.
void require_contained(const Grid3& grid, const Vec3& c, double a);

/// Unit-mass Gaussian density sampled on the grid.
ScalarField gaussian_density(const Grid3& grid, const Vec3& c, double a);

/// Orbital whose squared modulus is the unit-mass Gaussian density.
ComplexField gaussian_orbital(const Grid3& grid, const Vec3& c, double a);

/// Normalized sum of two Gaussian orbitals at x = -sep and x = +sep.
ComplexField two_lobe_orbital(const Grid3& grid, double sep, double a);

/// rho_up = rho_dn = (N/2) g_a, sigma = 0. Integral |grad sqrt(rho)|^2 = 3N / (2 a^2).
SpinDensityField gaussian_diagonal(int n, double a, const Grid3& grid);

/// R^{ab} = N psi^a conj(psi^b). Rejects psi whose norm differs from 1 by
/// more than norm_tol.
SpinDensityField rank1_from_orbital(const ComplexField& psi_up, const ComplexField& psi_dn, int n,
                                    double norm_tol = 1e-6);

struct RankOneParams {
  int n_electrons = 2;
  double a_up = 1.0;
  double a_dn = 1.2;
  double separation = 1.0;
  double up_share = 1.0 / 3.0;
};

/// psi = (i sqrt(s) A, sqrt(1 - s) B) with two-lobe orbitals A (width a_up)
/// and B (width a_dn). With the defaults rho_up <= 2 rho_dn everywhere.
SpinDensityField rank1_two_lobe(const RankOneParams& p, const Grid3& grid);

struct MixtureParams {
  int n_electrons = 2;
  double a_up = 1.0;
  double a_dn = 1.25;
  Vec3 center_up{0.5, 0.0, 0.0};
  Vec3 center_dn{-0.5, 0.0, 0.0};
  double up_share = 0.5;
  double coupling = 0.5;     ///< |c| < 1
  double phase_slope = 0.5;  ///< theta = alpha x
};

/// rho_up, rho_dn Gaussians, sigma = c exp(i alpha x) sqrt(rho_up rho_dn).
/// det = (1 - c^2) rho_up rho_dn. Rejects |c| >= 1.
SpinDensityField full_rank_mixture(const MixtureParams& p, const Grid3& grid);

/// rho_up = N ((1 + b) g(x - d) - b g(x + d)), rho_dn = 0, sigma = 0, with
/// b = 0.1 and d = 1.5 a: only the sign condition fails.
SpinDensityField negative_lobe(int n, double a, const Grid3& grid);

/// rho_up = rho_dn = (N/2) g, sigma = (1 + eps) (N/2) g: only the
/// determinant condition fails.
SpinDensityField sigma_excess(int n, double a, const Grid3& grid, double eps = 0.05);

/// Diagonal Gaussian carrying `mass` electrons but labelled N.
SpinDensityField wrong_norm(int n, double mass, double a, const Grid3& grid);

/// Gaussian times (1 + H(x)), normalized and split evenly between spins.
/// sqrt(rho) jumps at x = 0, so its discrete H1 norm grows under refinement.
SpinDensityField step_density(int n, double a, const Grid3& grid);

}  // namespace sdrep
