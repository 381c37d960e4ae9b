#include "sdrep/harriman.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sdrep/error.hpp"

namespace sdrep {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t axis_index(const Grid3& g, std::size_t k, Axis a) {
  const GridIndex i = g.unflat(k);
  switch (a) {
    case Axis::X: return i.ix;
    case Axis::Y: return i.iy;
    case Axis::Z: return i.iz;
  }
  return 0;
}

// Per-node factors exp(i k theta) along the phase axis.
std::vector<cplx> phase_factors(const PhaseFunction& p, int k, double sign) {
  std::vector<cplx> out(p.theta.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::polar(1.0, sign * k * p.theta[i]);
  return out;
}

// Cumulative trapezoid: monotone for m >= 0 and ends at the trapezoid sum.
std::vector<double> trapezoid_cumulative(std::span<const double> m, double h) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 0; i + 1 < m.size(); ++i) out[i + 1] = out[i] + 0.5 * h * (m[i] + m[i + 1]);
  return out;
}

// Largest drop below the running maximum.
double max_dip(std::span<const double> f) {
  double top = f.empty() ? 0.0 : f.front(), dip = 0.0;
  for (double v : f) {
    top = std::max(top, v);
    dip = std::max(dip, top - v);
  }
  return dip;
}

// Spectral ringing above this share of the total marks an unresolved marginal.
constexpr double kRingingRel = 1e-10;

double division_floor(const SpinDensityField& r, const ToleranceConfig& tol) {
  const double f = tol.floor_rel * r.max_total();
  return f > 0.0 ? f : std::numeric_limits<double>::min();
}

}  // namespace

std::vector<double> cumulative_integral(std::span<const double> fp, double h) {
  const std::size_t n = fp.size();
  if (n < 2) throw InvalidArgument("cumulative_integral: need at least two samples");
  const std::size_t m = n - 1;
  const double len = static_cast<double>(m) * h;
  const double a = fp.front(), b = fp.back();

  std::vector<double> g(m);
  for (std::size_t i = 0; i < m; ++i)
    g[i] = fp[i] - (a + (b - a) * static_cast<double>(i) / static_cast<double>(m));

  auto twiddle = [m](std::size_t j, std::size_t i, double sign) {
    const double ang = kTwoPi * static_cast<double>((j * i) % m) / static_cast<double>(m);
    return std::polar(1.0, sign * ang);
  };

  std::vector<cplx> c(m);
  for (std::size_t j = 0; j < m; ++j) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += g[i] * twiddle(j, i, -1.0);
    c[j] = acc;
  }
  const double mean = c[0].real() / static_cast<double>(m);

  // Antiderivative coefficients; the Nyquist mode has no odd partner.
  std::vector<cplx> ci(m, 0.0);
  for (std::size_t j = 1; j < m; ++j) {
    if (2 * j == m) continue;
    const double freq = j <= m / 2 ? static_cast<double>(j)
                                   : static_cast<double>(j) - static_cast<double>(m);
    ci[j] = c[j] / (cplx(0.0, 1.0) * (kTwoPi * freq / len));
  }
  std::vector<double> per(m);
  for (std::size_t i = 0; i < m; ++i) {
    cplx acc = 0.0;
    for (std::size_t j = 1; j < m; ++j) acc += ci[j] * twiddle(j, i, 1.0);
    per[i] = acc.real() / static_cast<double>(m);
  }

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) * h;
    const double p = i < m ? per[i] : per[0];
    out[i] = a * x + (b - a) * x * x / (2.0 * len) + mean * x + (p - per[0]);
  }
  out[0] = 0.0;
  return out;
}

PhaseFunction build_phase(const ScalarField& rho, int n, Axis axis, const ToleranceConfig& tol) {
  tol.validate();
  if (n <= 0) throw InvalidArgument("build_phase: electron count must be positive");
  PhaseFunction p;
  p.axis = axis;
  p.h = rho.grid().spacing(axis);
  p.marginal = transverse_integral(rho, axis);
  p.f = cumulative_integral(p.marginal, p.h);
  if (max_dip(p.f) > kRingingRel * std::abs(p.f.back())) p.f = trapezoid_cumulative(p.marginal, p.h);
  // flat exactly where the marginal vanishes on the leading and trailing runs
  const std::size_t nodes = p.f.size();
  std::size_t first = 0, last = nodes;
  while (first < nodes && p.marginal[first] == 0.0) p.f[first++] = 0.0;
  while (last > first && p.marginal[last - 1] == 0.0) --last;
  for (std::size_t i = last; i < nodes; ++i) p.f[i] = p.f[nodes - 1];
  for (std::size_t i = 1; i < nodes; ++i) p.f[i] = std::max(p.f[i], p.f[i - 1]);

  const double raw_end = p.f.back();
  if (!(raw_end > 0.0)) throw PreconditionError("build_phase: density has no mass");
  const double scale = n / raw_end;
  p.renorm_adjust = std::abs(scale - 1.0);
  if (p.renorm_adjust > 10.0 * tol.norm_rel)
    throw PreconditionError("build_phase: renormalization by " + std::to_string(p.renorm_adjust) +
                            " exceeds 10 * tol.norm");
  for (double& v : p.f) v *= scale;
  p.f.back() = n;
  p.f_prime = p.marginal;
  for (double& v : p.f_prime) v *= scale;

  p.theta = p.f;
  p.theta_prime = p.f_prime;
  for (double& v : p.theta) v *= kTwoPi;
  for (double& v : p.theta_prime) v *= kTwoPi;
  return p;
}

Axis widest_axis(const ScalarField& rho) {
  Axis best = Axis::X;
  double best_var = -1.0;
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    const auto m = transverse_integral(rho, a);
    const auto w = rho.grid().trapezoid_weights(a);
    double mass = 0.0, first = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      mass += w[i] * m[i];
      first += w[i] * m[i] * rho.grid().coord(a, i);
    }
    if (!(mass > 0.0)) continue;
    const double mean = first / mass;
    double var = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double d = rho.grid().coord(a, i) - mean;
      var += w[i] * m[i] * d * d;
    }
    var /= mass;
    if (var > best_var * (1.0 + 1e-12)) {
      best_var = var;
      best = a;
    }
  }
  return best;
}

BaseSpinor base_spinor(const SpinDensityField& r, const ToleranceConfig& tol) {
  tol.validate();
  const Grid3& g = r.grid();
  const double max_rho = r.max_total();
  const ScalarField det = det_field(r);
  const double det_tol = kNullDetRel * max_rho * max_rho;
  const auto nonnull = static_cast<std::size_t>(
      std::count_if(det.values().begin(), det.values().end(),
                    [&](double d) { return std::abs(d) > det_tol; }));
  if (static_cast<double>(nonnull) > 1e-3 * static_cast<double>(g.size()))
    throw PreconditionError("base_spinor: determinant is not null on " + std::to_string(nonnull) +
                            " of " + std::to_string(g.size()) + " points");

  const double tol_neg = tol.neg_rel * max_rho;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (r.rho_up[k] > 2.0 * r.rho_dn[k] + tol_neg) {
      const GridIndex i = g.unflat(k);
      throw PreconditionError("base_spinor: rho_up > 2 rho_dn at node (" + std::to_string(i.ix) +
                              ", " + std::to_string(i.iy) + ", " + std::to_string(i.iz) + ")");
    }
  }

  const double floor = division_floor(r, tol);
  BaseSpinor out{ComplexField(g), ComplexField(g), 0};
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double up = std::max(r.rho_up[k], 0.0), dn = std::max(r.rho_dn[k], 0.0);
    const double sdn = std::sqrt(dn);
    out.dn[k] = sdn;
    if (dn >= floor) {
      out.up[k] = r.sigma[k] / sdn;
    } else {
      out.up[k] = std::sqrt(up);
      if (up > 0.0) ++out.fallback_points;
    }
  }
  return out;
}

bool orthogonalize_phase(PhaseFunction& phase, int n) {
  if (n < 2) return true;
  const std::size_t nodes = phase.theta.size();
  const auto nu = static_cast<std::size_t>(n - 1);
  std::vector<double> w(nodes, phase.h);
  w.front() = w.back() = 0.5 * phase.h;
  std::vector<double> mass(nodes);
  for (std::size_t i = 0; i < nodes; ++i) mass[i] = w[i] * phase.marginal[i] / n;
  const std::vector<double> t0 = phase.theta;

  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * nu));
  auto big_theta = [&](const Eigen::VectorXd& q) {
    std::vector<double> th(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
      double v = t0[i];
      for (std::size_t j = 1; j <= nu; ++j) {
        const double jt = static_cast<double>(j) * t0[i];
        v += q[static_cast<Eigen::Index>(2 * (j - 1))] * std::sin(jt) +
             q[static_cast<Eigen::Index>(2 * (j - 1) + 1)] * (std::cos(jt) - 1.0);
      }
      th[i] = v;
    }
    return th;
  };
  auto residual = [&](const std::vector<double>& th) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(2 * nu));
    for (std::size_t m = 1; m <= nu; ++m) {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < nodes; ++i)
        acc += mass[i] * std::polar(1.0, static_cast<double>(m) * th[i]);
      r[static_cast<Eigen::Index>(2 * (m - 1))] = acc.real();
      r[static_cast<Eigen::Index>(2 * (m - 1) + 1)] = acc.imag();
    }
    return r;
  };

  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    const auto th = big_theta(p);
    const Eigen::VectorXd r = residual(th);
    if (!r.allFinite()) return false;
    if (r.lpNorm<Eigen::Infinity>() < 1e-15) {
      converged = true;
      break;
    }
    Eigen::MatrixXd jac(r.size(), r.size());
    for (std::size_t m = 1; m <= nu; ++m) {
      for (std::size_t j = 1; j <= nu; ++j) {
        cplx da = 0.0, db = 0.0;
        for (std::size_t i = 0; i < nodes; ++i) {
          const cplx e = cplx(0.0, static_cast<double>(m)) * mass[i] *
                         std::polar(1.0, static_cast<double>(m) * th[i]);
          const double jt = static_cast<double>(j) * t0[i];
          da += e * std::sin(jt);
          db += e * (std::cos(jt) - 1.0);
        }
        const auto row = static_cast<Eigen::Index>(2 * (m - 1));
        const auto col = static_cast<Eigen::Index>(2 * (j - 1));
        jac(row, col) = da.real();
        jac(row + 1, col) = da.imag();
        jac(row, col + 1) = db.real();
        jac(row + 1, col + 1) = db.imag();
      }
    }
    p -= jac.colPivHouseholderQr().solve(r);
  }
  if (!converged || !p.allFinite()) return false;

  phase.theta = big_theta(p);
  for (std::size_t i = 0; i < nodes; ++i) {
    double d = 1.0;
    for (std::size_t j = 1; j <= nu; ++j) {
      const double jt = static_cast<double>(j) * t0[i];
      d += static_cast<double>(j) * (p[static_cast<Eigen::Index>(2 * (j - 1))] * std::cos(jt) -
                                     p[static_cast<Eigen::Index>(2 * (j - 1) + 1)] * std::sin(jt));
    }
    phase.theta_prime[i] *= d;
  }
  return true;
}

OrbitalSet build_orbitals(const SpinDensityField& r, const HarrimanOptions& opt) {
  const int n = r.n_electrons;
  BaseSpinor base = base_spinor(r, opt.tol);
  const ScalarField rho = r.total();
  Axis axis = Axis::X;
  switch (opt.axis) {
    case AxisChoice::X: axis = Axis::X; break;
    case AxisChoice::Y: axis = Axis::Y; break;
    case AxisChoice::Z: axis = Axis::Z; break;
    case AxisChoice::Auto: axis = widest_axis(rho); break;
  }
  PhaseFunction phase = build_phase(rho, n, axis, opt.tol);
  if (opt.orthogonalize && !orthogonalize_phase(phase, n))
    throw PreconditionError("build_orbitals: phase orthogonalization did not converge");

  const Grid3& g = r.grid();
  std::vector<std::size_t> node(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) node[k] = axis_index(g, k, axis);

  OrbitalSet set;
  set.fallback_points = base.fallback_points;
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 1; k <= n; ++k) {
    const auto e = phase_factors(phase, k, 1.0);
    Spinor s{ComplexField(g), ComplexField(g), k};
    for (std::size_t q = 0; q < g.size(); ++q) {
      const cplx f = norm * e[node[q]];
      s.up[q] = base.up[q] * f;
      s.dn[q] = base.dn[q] * f;
    }
    set.orbitals.push_back(std::move(s));
  }
  set.phase = std::move(phase);
  return set;
}

cplx overlap(const Spinor& a, const Spinor& b) {
  require_same_grid(a.up.grid(), b.up.grid(), "overlap");
  ComplexField prod(a.up.grid());
  for (std::size_t k = 0; k < prod.size(); ++k)
    prod[k] = std::conj(a.up[k]) * b.up[k] + std::conj(a.dn[k]) * b.dn[k];
  return integrate(prod);
}

double gram_deviation(const OrbitalSet& set) {
  double dev = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i; j < set.size(); ++j)
      dev = std::max(dev, std::abs(overlap(set.orbitals[i], set.orbitals[j]) -
                                   (i == j ? 1.0 : 0.0)));
  return dev;
}

Gradient<cplx> orbital_gradient(const OrbitalSet& set, std::size_t i, bool up, Stencil s) {
  const Spinor& o = set.orbitals.at(i);
  const ComplexField& c = up ? o.up : o.dn;
  if (!set.phase || o.k == 0) return gradient(c, s);

  const PhaseFunction& p = *set.phase;
  const Grid3& g = c.grid();
  if (p.theta.size() != g.n(p.axis))
    throw InvalidArgument("orbital_gradient: phase does not match the grid");
  const auto fwd = phase_factors(p, o.k, 1.0);
  const auto back = phase_factors(p, o.k, -1.0);
  std::vector<std::size_t> node(g.size());
  for (std::size_t q = 0; q < g.size(); ++q) node[q] = axis_index(g, q, p.axis);

  ComplexField u(g);
  for (std::size_t q = 0; q < g.size(); ++q) u[q] = c[q] * back[node[q]];
  Gradient<cplx> d = gradient(u, s);
  const auto ax = static_cast<std::size_t>(p.axis);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const cplx e = fwd[node[q]];
    for (auto& comp : d) comp[q] *= e;
    d[ax][q] += cplx(0.0, o.k * p.theta_prime[node[q]]) * c[q];
  }
  return d;
}

SpinKinetic orbital_kinetic(const OrbitalSet& set, std::size_t i, Stencil s) {
  auto energy = [&](bool up) {
    const Gradient<cplx> d = orbital_gradient(set, i, up, s);
    ScalarField sq(d[0].grid());
    for (std::size_t q = 0; q < sq.size(); ++q)
      sq[q] = std::norm(d[0][q]) + std::norm(d[1][q]) + std::norm(d[2][q]);
    return integrate(sq);
  };
  return {energy(true), energy(false)};
}

std::vector<KineticBound> kinetic_bounds(const SpinDensityField& r, const OrbitalSet& set,
                                         const ToleranceConfig& tol) {
  const ScalarField rho = r.total();
  const double sigma_term =
      weighted_gradient_l1(r.sigma, rho, division_floor(r, tol), tol.stencil).value;
  const double dn_term = integrate(gradient_norm_sq(sqrt_positive(r.rho_dn), tol.stencil));

  std::vector<double> marginal, w;
  if (set.phase) {
    marginal = transverse_integral(rho, set.phase->axis);
    w = r.grid().trapezoid_weights(set.phase->axis);
  }
  std::vector<KineticBound> out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    KineticBound b;
    b.k = set.orbitals[i].k;
    double phase_term = 0.0;
    if (set.phase) {
      std::vector<double> v(marginal.size());
      for (std::size_t j = 0; j < v.size(); ++j) {
        const double tp = b.k * set.phase->theta_prime[j];
        v[j] = w[j] * marginal[j] * tp * tp;
      }
      phase_term = pairwise_sum(v);
    }
    const SpinKinetic t = orbital_kinetic(set, i, tol.stencil);
    b.lhs_up = r.n_electrons * t.up;
    b.lhs_dn = r.n_electrons * t.dn;
    b.rhs = 6.0 * sigma_term + 4.0 * dn_term + phase_term;
    b.holds = b.lhs_up <= b.rhs && b.lhs_dn <= b.rhs;
    out.push_back(b);
  }
  return out;
}

}  // namespace sdrep
