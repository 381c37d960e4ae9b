#include "sdrep/matrix_sqrt.hpp"

#include <cmath>
#include <string>

#include "sdrep/error.hpp"

namespace sdrep {

PointSqrt sqrt_point(double rho_up, double rho_dn, cplx sigma, double sqrt_det, double floor) {
  const double denom = rho_up + rho_dn + 2.0 * sqrt_det;
  if (!(denom >= floor) || denom <= 0.0) return {0.0, 0.0, 0.0};
  const double inv = 1.0 / std::sqrt(denom);
  return {(rho_up + sqrt_det) * inv, (rho_dn + sqrt_det) * inv, sigma * inv};
}

SqrtField sqrt_field(const SpinDensityField& r, const ToleranceConfig& tol) {
  for (const ConditionResult& c : {check_nonnegative(r, tol), check_determinant(r, tol)})
    if (c.verdict == Verdict::Fail)
      throw PreconditionError("sqrt_field: input is not pointwise PSD (condition " + c.id +
                              ": " + c.name + ")");

  const ScalarField sd = sqrt_det_field(r);
  const double floor = kSqrtFloorRel * r.max_total();
  SqrtField out{ScalarField(r.grid()), ScalarField(r.grid()), ComplexField(r.grid())};
  for (std::size_t k = 0; k < sd.size(); ++k) {
    // tolerated round-off negatives on the diagonal
    const double up = std::max(r.rho_up[k], 0.0), dn = std::max(r.rho_dn[k], 0.0);
    const PointSqrt p = sqrt_point(up, dn, r.sigma[k], sd[k], floor);
    out.r_up[k] = p.r_up;
    out.r_dn[k] = p.r_dn;
    out.s[k] = p.s;
  }
  return out;
}

EigenDensities eigen_densities(const SqrtField& root) {
  EigenDensities e{ScalarField(root.grid()), ScalarField(root.grid())};
  for (std::size_t k = 0; k < root.r_up.size(); ++k) {
    const double a = root.r_up[k], b = root.r_dn[k];
    const double disc = (a - b) * (a - b) + 4.0 * std::norm(root.s[k]);
    const double sq = std::sqrt(disc);
    const double plus = 0.5 * (a + b + sq);
    const double minus = std::max(0.5 * (a + b - sq), 0.0);
    e.rho_plus[k] = plus * plus;
    e.rho_minus[k] = minus * minus;
  }
  return e;
}

EigenDensities eigen_densities(const SpinDensityField& r, const ToleranceConfig& tol) {
  return eigen_densities(sqrt_field(r, tol));
}

namespace {

ConditionResult corollary_impl(const SpinDensityField& r, const SpinDensityField* refined,
                               const ToleranceConfig& tol) {
  auto norms = [&](const SpinDensityField& f) {
    const EigenDensities e = eigen_densities(f, tol);
    return std::vector<std::pair<std::string, double>>{
        {"h1_sqrt_rho_plus", integrate(gradient_norm_sq(sqrt_positive(e.rho_plus), tol.stencil))},
        {"h1_sqrt_rho_minus",
         integrate(gradient_norm_sq(sqrt_positive(e.rho_minus), tol.stencil))}};
  };
  ConditionResult c;
  c.id = "corollary";
  c.name = "sqrt(rho_plus/minus) in H1";
  c.values = norms(r);
  const bool finite = std::isfinite(c.values[0].second) && std::isfinite(c.values[1].second);
  if (!finite) {
    c.verdict = Verdict::Fail;
    c.note = "non-finite discrete value";
    return c;
  }
  c.verdict = Verdict::Pass;
  c.note = "finite at this resolution";
  if (refined) {
    c.refined_values = norms(*refined);
    c.refinement_checked = true;
    for (std::size_t i = 0; i < 2; ++i)
      c.max_rel_change = std::max(
          c.max_rel_change, relative_change(c.values[i].second, c.refined_values[i].second));
    if (c.max_rel_change < tol.refine_threshold) {
      c.note = "refinement-stable";
    } else {
      c.verdict = Verdict::Fail;
      c.note = "not refinement-stable";
    }
  }
  return c;
}

}  // namespace

ConditionResult corollary_check(const SpinDensityField& r, const ToleranceConfig& tol) {
  return corollary_impl(r, nullptr, tol);
}

ConditionResult corollary_check(const SpinDensityField& r, const SpinDensityField& refined,
                                const ToleranceConfig& tol) {
  return corollary_impl(r, &refined, tol);
}

SpinDensityField square(const SqrtField& root, int n_electrons) {
  SpinDensityField out(root.grid(), n_electrons);
  for (std::size_t k = 0; k < root.r_up.size(); ++k) {
    const double a = root.r_up[k], b = root.r_dn[k];
    const cplx s = root.s[k];
    out.rho_up[k] = a * a + std::norm(s);
    out.rho_dn[k] = b * b + std::norm(s);
    out.sigma[k] = s * (a + b);
  }
  return out;
}

}  // namespace sdrep
