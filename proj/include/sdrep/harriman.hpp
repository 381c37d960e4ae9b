#pragma once

// Orbitals for a null-determinant spin density with rho_up <= 2 rho_dn:
//   Phi_k = N^{-1/2} (phi_up, phi_dn) exp(i k Theta(x_axis)),  k = 1..N,
// with phi_up = sigma / sqrt(rho_dn), phi_dn = sqrt(rho_dn) and
// Theta = 2 pi f, f the cumulative marginal of rho along the phase axis.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sdrep/check.hpp"
#include "sdrep/spin_density.hpp"

namespace sdrep {

struct PhaseFunction {
  Axis axis = Axis::X;
  double h = 0.0;                    ///< spacing along the axis
  std::vector<double> marginal;      ///< transverse integral of rho
  std::vector<double> f_prime;       ///< marginal scaled so f ends at N
  std::vector<double> f;             ///< cumulative, f(0) = 0, f(end) = N
  std::vector<double> theta;         ///< base phase; orbital k carries k * theta
  std::vector<double> theta_prime;
  double renorm_adjust = 0.0;        ///< |N / raw end - 1|
};

/// Antiderivative of uniformly sampled fp with value 0 at the first node.
/// The endpoint ramp is integrated exactly and the periodic remainder by
/// its Fourier series, so the last value equals the trapezoid sum of fp.
std::vector<double> cumulative_integral(std::span<const double> fp, double h);

/// f' by transverse quadrature, f by cumulative_integral made monotone and
/// rescaled to end at exactly N. A marginal too sharp for the spectral
/// integral (visible ringing) falls back to the cumulative trapezoid.
/// Throws PreconditionError when the rescale exceeds 10 * tol.norm_rel.
PhaseFunction build_phase(const ScalarField& rho, int n, Axis axis,
                          const ToleranceConfig& tol = {});

/// Axis with the largest variance of the density marginal; ties go to x.
Axis widest_axis(const ScalarField& rho);

struct BaseSpinor {
  ComplexField up;
  ComplexField dn;
  std::size_t fallback_points = 0;  ///< rho_dn below floor with rho_up > 0
};

/// Null determinant (det <= kNullDetRel max(rho)^2 on all but 0.1% of the
/// points) and rho_up <= 2 rho_dn + tol.neg are required.
inline constexpr double kNullDetRel = 1e-10;
BaseSpinor base_spinor(const SpinDensityField& r, const ToleranceConfig& tol = {});

struct Spinor {
  ComplexField up;
  ComplexField dn;
  int k = 0;  ///< phase multiplier: the orbital carries exp(i k theta)
};

struct OrbitalSet {
  std::vector<Spinor> orbitals;
  /// Present for Harriman orbitals; lets gradients treat the phase
  /// analytically instead of differencing an under-resolved oscillation.
  std::optional<PhaseFunction> phase;
  std::size_t fallback_points = 0;

  std::size_t size() const { return orbitals.size(); }
};

enum class AxisChoice { X, Y, Z, Auto };

struct HarrimanOptions {
  AxisChoice axis = AxisChoice::X;
  /// Perturb the phase so the discrete Gram matrix is the identity to
  /// round-off (needed on coarse grids).
  bool orthogonalize = false;
  ToleranceConfig tol;
};

OrbitalSet build_orbitals(const SpinDensityField& r, const HarrimanOptions& opt = {});

/// Newton solve for Theta = theta0 + sum_j a_j sin(j theta0) + b_j (cos(j theta0) - 1),
/// j < N, making sum_i M_i exp(i m Theta_i) vanish for m = 1..N-1, where M is
/// the quadrature-weighted marginal. Returns false if it did not converge;
/// the phase is then left unchanged.
bool orthogonalize_phase(PhaseFunction& phase, int n);

/// <a|b> = integral of conj(a_up) b_up + conj(a_dn) b_dn.
cplx overlap(const Spinor& a, const Spinor& b);

/// max |<Phi_k|Phi_l> - delta_kl|.
double gram_deviation(const OrbitalSet& set);

/// Gradient of one orbital component; with a phase present the derivative
/// along its axis is taken as exp(i k theta) d(u) + i k theta' Phi, u the
/// demodulated component.
Gradient<cplx> orbital_gradient(const OrbitalSet& set, std::size_t i, bool up,
                                Stencil s = kDefaultStencil);

struct SpinKinetic {
  double up = 0.0;
  double dn = 0.0;
  double total() const { return up + dn; }
};

/// integral |grad Phi_up|^2 and |grad Phi_dn|^2 for orbital i.
SpinKinetic orbital_kinetic(const OrbitalSet& set, std::size_t i, Stencil s = kDefaultStencil);

/// Per-orbital kinetic bound
///   N |grad Phi_k^alpha|^2 <= 6 |grad sigma|^2 / rho + 4 |grad sqrt(rho_dn)|^2 + rho theta_k'^2
/// integrated, evaluated in the frame the orbitals were built in.
struct KineticBound {
  int k = 0;
  double lhs_up = 0.0;
  double lhs_dn = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

std::vector<KineticBound> kinetic_bounds(const SpinDensityField& r, const OrbitalSet& set,
                                         const ToleranceConfig& tol = {});

}  // namespace sdrep
