#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdrep/field.hpp"
#include "sdrep/spin_density.hpp"

namespace sdrep {

/// Tolerances are relative: neg and floor scale with max(rho), norm with N.
struct ToleranceConfig {
  double neg_rel = 1e-10;      ///< tol.neg = neg_rel * max(rho)
  double norm_rel = 1e-6;      ///< tol.norm = norm_rel * N
  double floor_rel = 1e-12;    ///< division floor for rho^-1 weights
  double refine_threshold = 0.05;
  double indeterminate_fraction = 0.01;
  Stencil stencil = kDefaultStencil;

  void validate() const;
};

enum class Verdict { Pass, Fail, Indeterminate };

const char* to_string(Verdict v);

/// One line of the representability conditions.
struct ConditionResult {
  std::string id;    ///< "a".."g", or "corollary"
  std::string name;
  Verdict verdict = Verdict::Pass;
  /// Named discrete values at the working resolution.
  std::vector<std::pair<std::string, double>> values;
  /// Same values on the refined grid, when one was supplied.
  std::vector<std::pair<std::string, double>> refined_values;
  double max_rel_change = 0.0;
  bool refinement_checked = false;
  std::size_t masked = 0;
  std::size_t masked_significant = 0;
  std::optional<GridIndex> worst;
  std::string note;

  double value(const std::string& key) const;
};

struct CheckReport {
  std::vector<ConditionResult> conditions;  ///< exactly a..g, in order
  Verdict overall = Verdict::Pass;
  bool boundary_warning = false;
  double boundary_ratio = 0.0;  ///< max boundary rho / max rho
  std::size_t grid_points = 0;

  const ConditionResult& condition(const std::string& id) const;
};

/// Conditions (a) and (b) alone; cheap pointwise scans.
ConditionResult check_nonnegative(const SpinDensityField& r, const ToleranceConfig& tol = {});
ConditionResult check_determinant(const SpinDensityField& r, const ToleranceConfig& tol = {});

/// Relative change used for refinement decisions; 0 when both are 0.
double relative_change(double coarse, double fine);

/// Decide the representability conditions (a)-(g):
///  (a) rho_up, rho_dn >= -tol.neg            (b) det >= -tol.neg^2
///  (c) |int tr R - N| <= tol.norm            (d) int |grad sqrt(rho_up/dn)|^2
///  (e) W^{1,3/2} norms of sigma, sqrt(det)   (f) int |grad sigma|^2 / rho
///  (g) int |grad sqrt(det)|^2 / rho
/// (d)-(g) pass when finite; with a refined field they additionally must
/// change by less than tol.refine_threshold. They are indeterminate when
/// more than tol.indeterminate_fraction of the points are significantly
/// masked by the division floor.
CheckReport check(const SpinDensityField& r, const ToleranceConfig& tol = {});
CheckReport check(const SpinDensityField& r, const SpinDensityField& refined,
                  const ToleranceConfig& tol = {});

/// Spinless conditions: R = diag(rho/2, rho/2) run through check().
CheckReport check_spinless(const ScalarField& rho, int n, const ToleranceConfig& tol = {});
CheckReport check_spinless(const ScalarField& rho, const ScalarField& refined, int n,
                           const ToleranceConfig& tol = {});

/// Discrete norms behind (c)-(g), shared by the checker and the refinement
/// study.
struct RegularityNorms {
  double trace = 0.0;
  double h1_up = 0.0, h1_dn = 0.0;
  double w132_sigma = 0.0, w132_sqrt_det = 0.0;
  WeightedIntegral sigma_weighted;
  WeightedIntegral sqrt_det_weighted;
};

RegularityNorms regularity_norms(const SpinDensityField& r, const ToleranceConfig& tol = {});

/// sqrt(max(f, 0)).
ScalarField sqrt_positive(const ScalarField& f);

}  // namespace sdrep
