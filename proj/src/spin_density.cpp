#include "sdrep/spin_density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdrep/error.hpp"

namespace sdrep {

SpinDensityField::SpinDensityField(ScalarField up, ScalarField dn, ComplexField sig, int n)
    : rho_up(std::move(up)), rho_dn(std::move(dn)), sigma(std::move(sig)), n_electrons(n) {
  require_same_grid(rho_up.grid(), rho_dn.grid(), "spin density");
  require_same_grid(rho_up.grid(), sigma.grid(), "spin density");
  if (n_electrons <= 0) throw InvalidArgument("spin density: electron count must be positive");
}

SpinDensityField::SpinDensityField(const Grid3& grid, int n)
    : SpinDensityField(ScalarField(grid), ScalarField(grid), ComplexField(grid), n) {}

ScalarField SpinDensityField::total() const {
  ScalarField rho(grid());
  for (std::size_t k = 0; k < rho.size(); ++k) rho[k] = rho_up[k] + rho_dn[k];
  return rho;
}

double SpinDensityField::max_total() const {
  double m = 0.0;
  for (std::size_t k = 0; k < rho_up.size(); ++k) m = std::max(m, rho_up[k] + rho_dn[k]);
  return m;
}

SpinDensityField SpinDensityField::scaled(double c) const {
  SpinDensityField out = *this;
  out.rho_up *= c;
  out.rho_dn *= c;
  out.sigma *= c;
  return out;
}

ScalarField det_field(const SpinDensityField& r) {
  const double m = r.max_total();
  const double clamp = kDetClampRel * m * m;
  ScalarField det(r.grid());
  for (std::size_t k = 0; k < det.size(); ++k) {
    const double d = r.rho_up[k] * r.rho_dn[k] - std::norm(r.sigma[k]);
    det[k] = (d < 0.0 && -d <= clamp) ? 0.0 : d;
  }
  return det;
}

ScalarField sqrt_det_field(const SpinDensityField& r) {
  ScalarField det = det_field(r);
  for (std::size_t k = 0; k < det.size(); ++k) {
    const double rho = r.rho_up[k] + r.rho_dn[k];
    det[k] = det[k] > kDetClampRel * rho * rho ? std::sqrt(det[k]) : 0.0;
  }
  return det;
}

double trace_integral(const SpinDensityField& r) { return integrate(r.total()); }

SpinDensityField spin_swap(const SpinDensityField& r) {
  return SpinDensityField(r.rho_dn, r.rho_up, r.sigma.map([](cplx z) { return std::conj(z); }),
                          r.n_electrons);
}

SpinDensityField convex_combine(const std::vector<std::pair<double, SpinDensityField>>& parts) {
  if (parts.empty()) throw InvalidArgument("convex_combine: no parts");
  double total = 0.0;
  for (const auto& [w, f] : parts) {
    if (!(w >= 0.0)) throw InvalidArgument("convex_combine: negative weight");
    require_same_grid(parts.front().second.grid(), f.grid(), "convex_combine");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidArgument("convex_combine: weights sum to " + std::to_string(total));

  const auto& first = parts.front().second;
  int n = first.n_electrons;
  for (const auto& [w, f] : parts)
    if (f.n_electrons != n) n = 0;
  // Mixed electron counts: fall back to the rounded trace of the result.
  SpinDensityField out(first.grid(), n > 0 ? n : 1);
  if (parts.size() == 1 && parts.front().first == 1.0) {
    out = first;
    return out;
  }
  for (const auto& [w, f] : parts) {
    for (std::size_t k = 0; k < out.rho_up.size(); ++k) {
      out.rho_up[k] += w * f.rho_up[k];
      out.rho_dn[k] += w * f.rho_dn[k];
      out.sigma[k] += w * f.sigma[k];
    }
  }
  if (n <= 0) out.n_electrons = std::max(1, static_cast<int>(std::lround(trace_integral(out))));
  return out;
}

}  // namespace sdrep
