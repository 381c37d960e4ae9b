#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdrep/check.hpp"
#include "sdrep/harriman.hpp"
#include "sdrep/spin_density.hpp"
#include "sdrep/witness.hpp"

namespace sdrep {

/// chi(x) = 0 for x <= 1/2, 1 for x >= 2, quintic smoothstep
/// u^3 (10 - 15u + 6u^2) in u = (x - 1/2) / (3/2) in between. C^2.
struct CutoffFunction {
  double operator()(double x) const;
};

/// weight * piece1 + (1 - weight) * piece2 = input. A piece whose weight is
/// below kDegenerateWeight is dropped and the other carries weight 1.
struct SplitResult {
  double t = 0.0;
  std::optional<SpinDensityField> piece1;
  std::optional<SpinDensityField> piece2;
};

inline constexpr double kDegenerateWeight = 1e-12;

/// R = R_up + R_dn with
///   R_up = [[r_up^2, s r_up], [., |s|^2]],  R_dn = [[|s|^2, s r_dn], [., r_dn^2]]
/// from the square root; t = integral tr R_up / N. Both pieces have null
/// determinant and are rescaled to N electrons.
SplitResult rank1_split(const SpinDensityField& r, const ToleranceConfig& tol = {});

/// piece1 = chi^2(rho_up / rho_dn) R, piece2 = (1 - chi^2) R, both rescaled.
/// The ratio is +inf where only rho_dn vanishes and 1 where both do.
/// Requires a null determinant.
SplitResult ratio_split(const SpinDensityField& r, const CutoffFunction& chi = {},
                        const ToleranceConfig& tol = {});

/// True when det <= kNullDetRel * max(rho)^2 at every point.
bool is_null_determinant(const SpinDensityField& r);

/// rho_up <= factor * rho_dn + tol.neg at every point.
bool ratio_bounded(const ScalarField& num, const ScalarField& den, double factor,
                   const ToleranceConfig& tol, double max_rho);

struct ConstructOptions {
  HarrimanOptions harriman;
  CutoffFunction chi;
  /// Run the full checker on every intermediate piece and abort on failure.
  bool check_pieces = true;
};

/// rank1_split (skipped for null-determinant input), then per piece either
/// Harriman directly, Harriman on the spin-swapped piece, or ratio_split
/// followed by both. Throws PreconditionError naming the failing stage.
Witness construct_witness(const SpinDensityField& r, const ConstructOptions& opt = {});

}  // namespace sdrep
