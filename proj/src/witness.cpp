#include "sdrep/witness.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

#include "sdrep/error.hpp"

namespace sdrep {

double Witness::weight_sum() const {
  std::vector<double> w;
  for (const auto& b : branches) w.push_back(b.weight);
  return pairwise_sum(w);
}

SpinDensityField density_of(const Witness& w) {
  SpinDensityField out(w.grid, w.n_electrons);
  for (const Branch& b : w.branches) {
    for (const Spinor& o : b.orbitals.orbitals) {
      require_same_grid(w.grid, o.up.grid(), "density_of");
      for (std::size_t k = 0; k < out.rho_up.size(); ++k) {
        out.rho_up[k] += b.weight * std::norm(o.up[k]);
        out.rho_dn[k] += b.weight * std::norm(o.dn[k]);
        out.sigma[k] += b.weight * o.up[k] * std::conj(o.dn[k]);
      }
    }
  }
  return out;
}

SpinKinetic spin_kinetic(const Witness& w, Stencil s) {
  SpinKinetic t;
  for (const Branch& b : w.branches) {
    for (std::size_t i = 0; i < b.orbitals.size(); ++i) {
      const SpinKinetic e = orbital_kinetic(b.orbitals, i, s);
      t.up += b.weight * e.up;
      t.dn += b.weight * e.dn;
    }
  }
  return t;
}

double kinetic_energy(const Witness& w, Stencil s) { return spin_kinetic(w, s).total(); }

double density_mismatch(const SpinDensityField& a, const SpinDensityField& b) {
  require_same_grid(a.grid(), b.grid(), "density_mismatch");
  ScalarField d(a.grid());
  for (std::size_t k = 0; k < d.size(); ++k)
    d[k] = std::abs(a.rho_up[k] - b.rho_up[k]) + std::abs(a.rho_dn[k] - b.rho_dn[k]) +
           2.0 * std::abs(a.sigma[k] - b.sigma[k]);
  return integrate(d) / b.n_electrons;
}

bool VerifyReport::passed() const {
  return mismatch_ok && gram_ok && weight_ok && kinetic_ok && inequalities_ok;
}

VerifyReport verify(const Witness& w, const SpinDensityField& target, const VerifyOptions& opt) {
  require_same_grid(w.grid, target.grid(), "verify");
  VerifyReport rep;
  const SpinDensityField rec = density_of(w);
  rep.density_mismatch = density_mismatch(rec, target);
  rep.mismatch_ok = rep.density_mismatch <= opt.mismatch_tol;

  rep.gram_ok = true;
  for (const Branch& b : w.branches) {
    const double g = gram_deviation(b.orbitals);
    rep.gram_deviation.push_back(g);
    if (!(g <= opt.gram_tol)) rep.gram_ok = false;
  }

  rep.weight_sum_deviation = std::abs(w.weight_sum() - 1.0);
  bool nonneg = std::all_of(w.branches.begin(), w.branches.end(),
                            [](const Branch& b) { return b.weight >= 0.0; });
  rep.weight_ok = nonneg && rep.weight_sum_deviation <= opt.weight_tol;

  rep.kinetic = spin_kinetic(w, opt.tol.stencil);
  rep.kinetic_ok = std::isfinite(rep.kinetic.up) && std::isfinite(rep.kinetic.dn);

  const RegularityNorms n = regularity_norms(rec, opt.tol);
  const double total = rep.kinetic.total();
  auto add = [&](std::string name, double lhs, double rhs) {
    rep.inequalities.push_back({std::move(name), lhs, rhs, lhs <= (1.0 + opt.slack) * rhs});
  };
  add("h1_sqrt_rho_up <= T_up", n.h1_up, rep.kinetic.up);
  add("h1_sqrt_rho_dn <= T_dn", n.h1_dn, rep.kinetic.dn);
  add("grad_sigma_sq_over_rho <= T", n.sigma_weighted.value, total);
  add("grad_sqrt_det_sq_over_rho <= 4T", n.sqrt_det_weighted.value, 4.0 * total);
  rep.inequalities_ok = std::all_of(rep.inequalities.begin(), rep.inequalities.end(),
                                    [](const Inequality& q) { return q.holds; });
  return rep;
}

std::vector<double> coleman_occupations(const Witness& w) {
  std::vector<std::pair<double, const Spinor*>> all;
  for (const Branch& b : w.branches)
    for (const Spinor& o : b.orbitals.orbitals) all.emplace_back(b.weight, &o);
  const auto m = static_cast<Eigen::Index>(all.size());
  Eigen::MatrixXcd a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const auto& [pi, oi] = all[static_cast<std::size_t>(i)];
      const auto& [pj, oj] = all[static_cast<std::size_t>(j)];
      const cplx s = std::sqrt(pi * pj) * overlap(*oi, *oj);
      a(i, j) = s;
      a(j, i) = std::conj(s);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + m);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

}  // namespace sdrep
