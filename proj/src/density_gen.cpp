#include "sdrep/density_gen.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sdrep/error.hpp"

namespace sdrep {

namespace {

constexpr double kPi = std::numbers::pi;

double r2(double x, double y, double z, const Vec3& c) {
  return (x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]) + (z - c[2]) * (z - c[2]);
}

void require_positive(double a, const char* what) {
  if (!(a > 0.0)) throw InvalidArgument(std::string(what) + " must be positive");
}

void require_electrons(int n) {
  if (n <= 0) throw InvalidArgument("electron count must be positive");
}

}  // namespace

double gaussian_mass_outside(const Grid3& grid, const Vec3& c, double a) {
  require_positive(a, "width");
  double log_inside = 0.0;
  for (std::size_t d = 0; d < 3; ++d) {
    const double out = 0.5 * (std::erfc((grid.hi()[d] - c[d]) / a) +
                              std::erfc((c[d] - grid.lo()[d]) / a));
    log_inside += std::log1p(-std::min(out, 1.0));
  }
  return -std::expm1(log_inside);
}

void require_contained(const Grid3& grid, const Vec3& c, double a) {
  const double out = gaussian_mass_outside(grid, c, a);
  if (out > 1e-8)
    throw InvalidArgument("box too small: " + std::to_string(out) +
                          " of the Gaussian mass lies outside");
}

ScalarField gaussian_density(const Grid3& grid, const Vec3& c, double a) {
  require_positive(a, "width");
  const double norm = std::pow(kPi * a * a, -1.5);
  return ScalarField::sample(
      grid, [&](double x, double y, double z) { return norm * std::exp(-r2(x, y, z, c) / (a * a)); });
}

ComplexField gaussian_orbital(const Grid3& grid, const Vec3& c, double a) {
  require_positive(a, "width");
  const double norm = std::pow(kPi * a * a, -0.75);
  return ComplexField::sample(grid, [&](double x, double y, double z) {
    return cplx(norm * std::exp(-r2(x, y, z, c) / (2.0 * a * a)), 0.0);
  });
}

ComplexField two_lobe_orbital(const Grid3& grid, double sep, double a) {
  require_positive(a, "width");
  const Vec3 left{-sep, 0.0, 0.0}, right{sep, 0.0, 0.0};
  require_contained(grid, left, a);
  require_contained(grid, right, a);
  const double norm = std::pow(kPi * a * a, -0.75) / std::sqrt(2.0 * (1.0 + std::exp(-sep * sep / (a * a))));
  return ComplexField::sample(grid, [&](double x, double y, double z) {
    return cplx(norm * (std::exp(-r2(x, y, z, left) / (2.0 * a * a)) +
                        std::exp(-r2(x, y, z, right) / (2.0 * a * a))),
                0.0);
  });
}

SpinDensityField gaussian_diagonal(int n, double a, const Grid3& grid) {
  require_electrons(n);
  require_contained(grid, {0.0, 0.0, 0.0}, a);
  ScalarField half = gaussian_density(grid, {0.0, 0.0, 0.0}, a);
  half *= 0.5 * n;
  return SpinDensityField(half, half, ComplexField(grid), n);
}

SpinDensityField rank1_from_orbital(const ComplexField& psi_up, const ComplexField& psi_dn, int n,
                                    double norm_tol) {
  require_electrons(n);
  require_same_grid(psi_up.grid(), psi_dn.grid(), "rank1_from_orbital");
  const Grid3& g = psi_up.grid();
  ScalarField mod(g);
  for (std::size_t k = 0; k < g.size(); ++k) mod[k] = std::norm(psi_up[k]) + std::norm(psi_dn[k]);
  const double norm = integrate(mod);
  if (std::abs(norm - 1.0) > norm_tol)
    throw InvalidArgument("rank1_from_orbital: orbital norm is " + std::to_string(norm));
  SpinDensityField r(g, n);
  for (std::size_t k = 0; k < g.size(); ++k) {
    r.rho_up[k] = n * std::norm(psi_up[k]);
    r.rho_dn[k] = n * std::norm(psi_dn[k]);
    r.sigma[k] = static_cast<double>(n) * psi_up[k] * std::conj(psi_dn[k]);
  }
  return r;
}

SpinDensityField rank1_two_lobe(const RankOneParams& p, const Grid3& grid) {
  if (!(p.up_share > 0.0 && p.up_share < 1.0))
    throw InvalidArgument("up_share must lie in (0, 1)");
  ComplexField up = two_lobe_orbital(grid, p.separation, p.a_up);
  ComplexField dn = two_lobe_orbital(grid, p.separation, p.a_dn);
  const cplx cu(0.0, std::sqrt(p.up_share));
  const double cd = std::sqrt(1.0 - p.up_share);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    up[k] *= cu;
    dn[k] *= cd;
  }
  return rank1_from_orbital(up, dn, p.n_electrons);
}

SpinDensityField full_rank_mixture(const MixtureParams& p, const Grid3& grid) {
  require_electrons(p.n_electrons);
  if (!(std::abs(p.coupling) < 1.0)) throw InvalidArgument("coupling |c| must be below 1");
  if (!(p.up_share > 0.0 && p.up_share < 1.0))
    throw InvalidArgument("up_share must lie in (0, 1)");
  require_contained(grid, p.center_up, p.a_up);
  require_contained(grid, p.center_dn, p.a_dn);
  ScalarField up = gaussian_density(grid, p.center_up, p.a_up);
  ScalarField dn = gaussian_density(grid, p.center_dn, p.a_dn);
  up *= p.n_electrons * p.up_share;
  dn *= p.n_electrons * (1.0 - p.up_share);
  ComplexField sigma(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double x = grid.coord(Axis::X, grid.unflat(k).ix);
    sigma[k] = p.coupling * std::polar(1.0, p.phase_slope * x) * std::sqrt(up[k] * dn[k]);
  }
  return SpinDensityField(std::move(up), std::move(dn), std::move(sigma), p.n_electrons);
}

SpinDensityField negative_lobe(int n, double a, const Grid3& grid) {
  require_electrons(n);
  const double b = 0.1, d = 1.5 * a;
  const Vec3 pos{d, 0.0, 0.0}, neg{-d, 0.0, 0.0};
  require_contained(grid, pos, a);
  require_contained(grid, neg, a);
  const ScalarField gp = gaussian_density(grid, pos, a);
  const ScalarField gn = gaussian_density(grid, neg, a);
  ScalarField up(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) up[k] = n * ((1.0 + b) * gp[k] - b * gn[k]);
  return SpinDensityField(std::move(up), ScalarField(grid), ComplexField(grid), n);
}

SpinDensityField sigma_excess(int n, double a, const Grid3& grid, double eps) {
  require_positive(eps, "eps");
  SpinDensityField r = gaussian_diagonal(n, a, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) r.sigma[k] = (1.0 + eps) * r.rho_up[k];
  return r;
}

SpinDensityField wrong_norm(int n, double mass, double a, const Grid3& grid) {
  require_electrons(n);
  require_positive(mass, "mass");
  require_contained(grid, {0.0, 0.0, 0.0}, a);
  ScalarField half = gaussian_density(grid, {0.0, 0.0, 0.0}, a);
  half *= 0.5 * mass;
  return SpinDensityField(half, half, ComplexField(grid), n);
}

SpinDensityField step_density(int n, double a, const Grid3& grid) {
  require_electrons(n);
  require_contained(grid, {0.0, 0.0, 0.0}, a);
  ScalarField half = gaussian_density(grid, {0.0, 0.0, 0.0}, a);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double x = grid.coord(Axis::X, grid.unflat(k).ix);
    const double step = x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5);
    // integral of g (1 + H) is 3/2
    half[k] *= 0.5 * n * (1.0 + step) / 1.5;
  }
  return SpinDensityField(half, half, ComplexField(grid), n);
}

}  // namespace sdrep
