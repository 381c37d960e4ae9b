#pragma once

#include <string>
#include <vector>

#include "sdrep/check.hpp"
#include "sdrep/harriman.hpp"
#include "sdrep/spin_density.hpp"

namespace sdrep {

/// One Slater determinant of the mixed state, with its weight.
struct Branch {
  double weight = 0.0;
  OrbitalSet orbitals;
  bool spin_swapped = false;  ///< built on the swapped piece, components already exchanged back
  std::string label;
  /// Per-orbital kinetic bound, evaluated in the frame the orbitals were built in.
  std::vector<KineticBound> bounds;
};

/// Gamma = sum_n p_n |Psi_n><Psi_n| with Slater determinants Psi_n.
struct Witness {
  Grid3 grid;
  int n_electrons = 0;
  std::vector<Branch> branches;

  double weight_sum() const;
};

/// sum_n p_n sum_k Phi_k^alpha conj(Phi_k^beta).
SpinDensityField density_of(const Witness& w);

/// Tr(-Laplace gamma^{alpha alpha}) per spin; no factor 1/2.
SpinKinetic spin_kinetic(const Witness& w, Stencil s = kDefaultStencil);
double kinetic_energy(const Witness& w, Stencil s = kDefaultStencil);

struct VerifyOptions {
  double mismatch_tol = 1e-8;  ///< relative L1 density mismatch
  double gram_tol = 1e-6;
  double weight_tol = 1e-12;
  double slack = 0.05;         ///< relative slack on the integrated inequalities
  ToleranceConfig tol;
};

struct Inequality {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct VerifyReport {
  double density_mismatch = 0.0;
  bool mismatch_ok = false;
  std::vector<double> gram_deviation;  ///< per branch
  bool gram_ok = false;
  double weight_sum_deviation = 0.0;
  bool weight_ok = false;
  SpinKinetic kinetic;
  bool kinetic_ok = false;
  /// H1 of sqrt(rho_up) and sqrt(rho_dn) against the spin kinetic traces,
  /// |grad sigma|^2 / rho against T, |grad sqrt(det)|^2 / rho against 4T.
  std::vector<Inequality> inequalities;
  bool inequalities_ok = false;

  bool passed() const;
};

/// Relative L1 distance: integral of |d rho_up| + |d rho_dn| + 2 |d sigma|, over N.
double density_mismatch(const SpinDensityField& a, const SpinDensityField& b);

VerifyReport verify(const Witness& w, const SpinDensityField& target,
                    const VerifyOptions& opt = {});

/// Eigenvalues of the one-body operator of the mixed state, from the
/// cross-branch orbital overlaps S and weights P as eig(P^1/2 S P^1/2).
/// Memory is quadratic in the total orbital count only.
std::vector<double> coleman_occupations(const Witness& w);

}  // namespace sdrep
