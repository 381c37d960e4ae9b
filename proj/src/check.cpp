#include "sdrep/check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdrep/error.hpp"

namespace sdrep {

void ToleranceConfig::validate() const {
  if (!(neg_rel > 0.0) || !(norm_rel > 0.0) || !(floor_rel > 0.0) ||
      !(refine_threshold > 0.0) || !(indeterminate_fraction > 0.0))
    throw InvalidArgument("tolerances must be positive");
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

double ConditionResult::value(const std::string& key) const {
  for (const auto& [k, v] : values)
    if (k == key) return v;
  throw InvalidArgument("condition " + id + " has no value '" + key + "'");
}

const ConditionResult& CheckReport::condition(const std::string& id) const {
  for (const auto& c : conditions)
    if (c.id == id) return c;
  throw InvalidArgument("no condition '" + id + "' in report");
}

double relative_change(double coarse, double fine) {
  if (coarse == fine) return 0.0;
  if (coarse == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(fine - coarse) / std::abs(coarse);
}

ScalarField sqrt_positive(const ScalarField& f) {
  return f.map([](double v) { return v > 0.0 ? std::sqrt(v) : 0.0; });
}

namespace {

double division_floor(const SpinDensityField& r, const ToleranceConfig& tol) {
  const double f = tol.floor_rel * r.max_total();
  return f > 0.0 ? f : std::numeric_limits<double>::min();
}

ConditionResult regularity_condition(std::string id, std::string name,
                                     std::vector<std::pair<std::string, double>> values,
                                     const std::vector<std::pair<std::string, double>>* fine,
                                     std::size_t masked, std::size_t masked_significant,
                                     std::size_t points, const ToleranceConfig& tol) {
  ConditionResult c;
  c.id = std::move(id);
  c.name = std::move(name);
  c.values = std::move(values);
  c.masked = masked;
  c.masked_significant = masked_significant;

  const bool finite = std::all_of(c.values.begin(), c.values.end(),
                                  [](const auto& kv) { return std::isfinite(kv.second); });
  if (!finite) {
    c.verdict = Verdict::Fail;
    c.note = "non-finite discrete value";
    return c;
  }
  if (fine) {
    c.refined_values = *fine;
    c.refinement_checked = true;
    for (std::size_t i = 0; i < c.values.size(); ++i)
      c.max_rel_change = std::max(c.max_rel_change,
                                  relative_change(c.values[i].second, (*fine)[i].second));
  }
  if (static_cast<double>(masked_significant) >
      tol.indeterminate_fraction * static_cast<double>(points)) {
    c.verdict = Verdict::Indeterminate;
    c.note = "division floor masks a significant share of the grid";
    return c;
  }
  if (fine && !(c.max_rel_change < tol.refine_threshold)) {
    c.verdict = Verdict::Fail;
    c.note = "not refinement-stable";
    return c;
  }
  c.verdict = Verdict::Pass;
  c.note = fine ? "refinement-stable" : "finite at this resolution";
  return c;
}

CheckReport check_impl(const SpinDensityField& r, const SpinDensityField* refined,
                       const ToleranceConfig& tol) {
  tol.validate();
  const std::size_t points = r.grid().size();
  const double max_rho = r.max_total();
  const double tol_norm = tol.norm_rel * r.n_electrons;

  CheckReport rep;
  rep.grid_points = points;

  rep.conditions.push_back(check_nonnegative(r, tol));
  rep.conditions.push_back(check_determinant(r, tol));

  const RegularityNorms n = regularity_norms(r, tol);
  std::optional<RegularityNorms> nf;
  if (refined) nf = regularity_norms(*refined, tol);

  {
    ConditionResult c;
    c.id = "c";
    c.name = "electron count";
    c.values = {{"trace_integral", n.trace},
                {"deviation", n.trace - r.n_electrons},
                {"tol_norm", tol_norm}};
    c.verdict = std::abs(n.trace - r.n_electrons) <= tol_norm ? Verdict::Pass : Verdict::Fail;
    rep.conditions.push_back(std::move(c));
  }

  using KV = std::vector<std::pair<std::string, double>>;
  auto fine = [&](auto make) -> std::optional<KV> {
    if (!nf) return std::nullopt;
    return make(*nf);
  };
  {
    KV vals{{"h1_sqrt_rho_up", n.h1_up}, {"h1_sqrt_rho_dn", n.h1_dn}};
    auto fv = fine([](const RegularityNorms& m) {
      return KV{{"h1_sqrt_rho_up", m.h1_up}, {"h1_sqrt_rho_dn", m.h1_dn}};
    });
    rep.conditions.push_back(regularity_condition("d", "sqrt(rho_up/dn) in H1", vals,
                                                  fv ? &*fv : nullptr, 0, 0, points, tol));
  }
  {
    KV vals{{"w132_sigma", n.w132_sigma}, {"w132_sqrt_det", n.w132_sqrt_det}};
    auto fv = fine([](const RegularityNorms& m) {
      return KV{{"w132_sigma", m.w132_sigma}, {"w132_sqrt_det", m.w132_sqrt_det}};
    });
    rep.conditions.push_back(regularity_condition("e", "sigma, sqrt(det) in W^{1,3/2}", vals,
                                                  fv ? &*fv : nullptr, 0, 0, points, tol));
  }
  {
    KV vals{{"grad_sigma_sq_over_rho", n.sigma_weighted.value}};
    auto fv = fine([](const RegularityNorms& m) {
      return KV{{"grad_sigma_sq_over_rho", m.sigma_weighted.value}};
    });
    rep.conditions.push_back(regularity_condition(
        "f", "|grad sigma|^2 / rho in L1", vals, fv ? &*fv : nullptr, n.sigma_weighted.masked,
        n.sigma_weighted.masked_significant, points, tol));
  }
  {
    KV vals{{"grad_sqrt_det_sq_over_rho", n.sqrt_det_weighted.value}};
    auto fv = fine([](const RegularityNorms& m) {
      return KV{{"grad_sqrt_det_sq_over_rho", m.sqrt_det_weighted.value}};
    });
    rep.conditions.push_back(regularity_condition(
        "g", "|grad sqrt(det)|^2 / rho in L1", vals, fv ? &*fv : nullptr,
        n.sqrt_det_weighted.masked, n.sqrt_det_weighted.masked_significant, points, tol));
  }

  rep.boundary_ratio = max_rho > 0.0 ? boundary_max_abs(r.total()) / max_rho : 0.0;
  rep.boundary_warning = rep.boundary_ratio > 1e-8;

  rep.overall = Verdict::Pass;
  for (const auto& c : rep.conditions) {
    if (c.verdict == Verdict::Fail) rep.overall = Verdict::Fail;
    if (c.verdict == Verdict::Indeterminate && rep.overall == Verdict::Pass)
      rep.overall = Verdict::Indeterminate;
  }
  return rep;
}

SpinDensityField spinless_field(const ScalarField& rho, int n) {
  ScalarField half = rho;
  half *= 0.5;
  return SpinDensityField(half, half, ComplexField(rho.grid()), n);
}

}  // namespace

ConditionResult check_nonnegative(const SpinDensityField& r, const ToleranceConfig& tol) {
  tol.validate();
  const double tol_neg = tol.neg_rel * r.max_total();
  ConditionResult a;
  a.id = "a";
  a.name = "nonnegative diagonal";
  double min_up = std::numeric_limits<double>::infinity(), min_dn = min_up, worst = min_up;
  std::size_t worst_k = 0;
  for (std::size_t k = 0; k < r.rho_up.size(); ++k) {
    min_up = std::min(min_up, r.rho_up[k]);
    min_dn = std::min(min_dn, r.rho_dn[k]);
    const double m = std::min(r.rho_up[k], r.rho_dn[k]);
    if (m < worst) {
      worst = m;
      worst_k = k;
    }
  }
  a.values = {{"min_rho_up", min_up}, {"min_rho_dn", min_dn}, {"tol_neg", tol_neg}};
  a.verdict = (min_up >= -tol_neg && min_dn >= -tol_neg) ? Verdict::Pass : Verdict::Fail;
  if (a.verdict == Verdict::Fail) a.worst = r.grid().unflat(worst_k);
  return a;
}

ConditionResult check_determinant(const SpinDensityField& r, const ToleranceConfig& tol) {
  tol.validate();
  const double tol_neg = tol.neg_rel * r.max_total();
  ConditionResult b;
  b.id = "b";
  b.name = "nonnegative determinant";
  const ScalarField det = det_field(r);
  auto v = det.values();
  const auto it = std::min_element(v.begin(), v.end());
  const double threshold = tol_neg * tol_neg;
  b.values = {{"min_det", *it}, {"tol_det", threshold}};
  b.verdict = *it >= -threshold ? Verdict::Pass : Verdict::Fail;
  if (b.verdict == Verdict::Fail)
    b.worst = r.grid().unflat(static_cast<std::size_t>(it - v.begin()));
  return b;
}

RegularityNorms regularity_norms(const SpinDensityField& r, const ToleranceConfig& tol) {
  RegularityNorms n;
  const ScalarField rho = r.total();
  n.trace = integrate(rho);
  n.h1_up = integrate(gradient_norm_sq(sqrt_positive(r.rho_up), tol.stencil));
  n.h1_dn = integrate(gradient_norm_sq(sqrt_positive(r.rho_dn), tol.stencil));
  const ScalarField sqrt_det = sqrt_det_field(r);
  n.w132_sigma = sobolev_norm(r.sigma, 1.5, tol.stencil);
  n.w132_sqrt_det = sobolev_norm(sqrt_det, 1.5, tol.stencil);
  const double floor = division_floor(r, tol);
  n.sigma_weighted = weighted_gradient_l1(r.sigma, rho, floor, tol.stencil);
  n.sqrt_det_weighted = weighted_gradient_l1(sqrt_det, rho, floor, tol.stencil);
  return n;
}

CheckReport check(const SpinDensityField& r, const ToleranceConfig& tol) {
  return check_impl(r, nullptr, tol);
}

CheckReport check(const SpinDensityField& r, const SpinDensityField& refined,
                  const ToleranceConfig& tol) {
  if (refined.n_electrons != r.n_electrons)
    throw InvalidArgument("check: refined field has a different electron count");
  return check_impl(r, &refined, tol);
}

CheckReport check_spinless(const ScalarField& rho, int n, const ToleranceConfig& tol) {
  return check(spinless_field(rho, n), tol);
}

CheckReport check_spinless(const ScalarField& rho, const ScalarField& refined, int n,
                           const ToleranceConfig& tol) {
  return check(spinless_field(rho, n), spinless_field(refined, n), tol);
}

}  // namespace sdrep
