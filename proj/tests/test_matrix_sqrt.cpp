#include <doctest.h>

#include <cmath>
#include <random>

#include "sdrep/density_gen.hpp"
#include "sdrep/error.hpp"
#include "sdrep/matrix_sqrt.hpp"

using namespace sdrep;

namespace {

SpinDensityField random_psd(const Grid3& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  SpinDensityField r(g, 1);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const cplx a(nd(rng), nd(rng)), b(nd(rng), nd(rng)), c(nd(rng), nd(rng)), d(nd(rng), nd(rng));
    r.rho_up[k] = std::norm(a) + std::norm(b);
    r.rho_dn[k] = std::norm(c) + std::norm(d);
    r.sigma[k] = a * std::conj(c) + b * std::conj(d);
  }
  // every fifth point rank one
  for (std::size_t k = 0; k < g.size(); k += 5) {
    const cplx a(nd(rng), nd(rng)), c(nd(rng), nd(rng));
    r.rho_up[k] = std::norm(a);
    r.rho_dn[k] = std::norm(c);
    r.sigma[k] = a * std::conj(c);
  }
  return r;
}

PointSqrt root_of(double up, double dn, cplx s) {
  const double det = std::max(0.0, up * dn - std::norm(s));
  return sqrt_point(up, dn, s, std::sqrt(det), 1e-14 * (up + dn));
}

}  // namespace

TEST_CASE("pointwise square root examples") {
  SUBCASE("2 I") {
    const PointSqrt p = root_of(2.0, 2.0, 0.0);
    CHECK(p.r_up == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(p.r_dn == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(p.s == cplx(0.0));
  }
  SUBCASE("rank one all-ones") {
    const PointSqrt p = root_of(1.0, 1.0, 1.0);
    const double v = 1.0 / std::sqrt(2.0);
    CHECK(p.r_up == doctest::Approx(v).epsilon(1e-15));
    CHECK(p.r_dn == doctest::Approx(v).epsilon(1e-15));
    CHECK(p.s.real() == doctest::Approx(v).epsilon(1e-15));
  }
  SUBCASE("complex off-diagonal") {
    // det = 0, rho = 5
    const PointSqrt p = root_of(4.0, 1.0, cplx(0.0, 2.0));
    CHECK(p.r_up == doctest::Approx(4.0 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK(p.r_dn == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK(std::abs(p.s - cplx(0.0, 2.0 / std::sqrt(5.0))) <= 1e-15);
  }
  SUBCASE("zero matrix") {
    const PointSqrt p = sqrt_point(0.0, 0.0, 0.0, 0.0, 1e-14);
    CHECK(p.r_up == 0.0);
    CHECK(p.r_dn == 0.0);
    CHECK(p.s == cplx(0.0));
  }
}

TEST_CASE("random PSD fields square back") {
  std::mt19937_64 rng(2024);
  const Grid3 g = Grid3::cube(10, 1.0);
  const SpinDensityField r = random_psd(g, rng);
  const SqrtField root = sqrt_field(r);
  const SpinDensityField back = square(root, 1);
  const double m = r.max_total();
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(root.r_up[k] >= 0.0);
    CHECK(root.r_dn[k] >= 0.0);
    CHECK(std::abs(back.rho_up[k] - r.rho_up[k]) <= 1e-10 * m);
    CHECK(std::abs(back.rho_dn[k] - r.rho_dn[k]) <= 1e-10 * m);
    CHECK(std::abs(back.sigma[k] - r.sigma[k]) <= 1e-10 * m);
    const double d_root = root.r_up[k] * root.r_dn[k] - std::norm(root.s[k]);
    CHECK(d_root >= -1e-12 * m);
    const double det = r.rho_up[k] * r.rho_dn[k] - std::norm(r.sigma[k]);
    CHECK(std::abs(d_root * d_root - std::max(det, 0.0)) <= 1e-10 * m * m);
  }
}

TEST_CASE("eigenvalues agree with the quadratic formula") {
  std::mt19937_64 rng(99);
  const Grid3 g = Grid3::cube(10, 1.0);
  const SpinDensityField r = random_psd(g, rng);
  const EigenDensities e = eigen_densities(r);
  const double m = r.max_total();
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double rho = r.rho_up[k] + r.rho_dn[k];
    const double disc = std::sqrt((r.rho_up[k] - r.rho_dn[k]) * (r.rho_up[k] - r.rho_dn[k]) +
                                  4.0 * std::norm(r.sigma[k]));
    CHECK(std::abs(e.rho_plus[k] - 0.5 * (rho + disc)) <= 1e-10 * m);
    CHECK(std::abs(e.rho_minus[k] - 0.5 * (rho - disc)) <= 1e-10 * m);
    CHECK(e.rho_plus[k] >= e.rho_minus[k]);
    CHECK(e.rho_minus[k] >= 0.0);
  }
}

TEST_CASE("eigenvalue special cases") {
  const Grid3 g = Grid3::cube(32, 8.0);
  SUBCASE("diagonal") {
    const SpinDensityField r(gaussian_density(g, {0, 0, 0}, 1.0), gaussian_density(g, {0, 0, 0}, 1.5),
                             ComplexField(g), 2);
    const EigenDensities e = eigen_densities(r);
    const double m = r.max_total();
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(std::abs(e.rho_plus[k] - std::max(r.rho_up[k], r.rho_dn[k])) <= 1e-12 * m);
      CHECK(std::abs(e.rho_minus[k] - std::min(r.rho_up[k], r.rho_dn[k])) <= 1e-12 * m);
    }
  }
  SUBCASE("rank one") {
    const SpinDensityField r = rank1_two_lobe({}, Grid3::cube(48, 11.0));
    const EigenDensities e = eigen_densities(r);
    const double m = r.max_total();
    for (std::size_t k = 0; k < r.grid().size(); ++k) {
      CHECK(std::abs(e.rho_minus[k]) <= 1e-10 * m);
      CHECK(std::abs(e.rho_plus[k] - (r.rho_up[k] + r.rho_dn[k])) <= 1e-10 * m);
    }
  }
}

TEST_CASE("non-PSD input is rejected") {
  const Grid3 g = Grid3::cube(32, 9.5);
  CHECK_THROWS_AS(sqrt_field(negative_lobe(2, 1.0, g)), PreconditionError);
  CHECK_THROWS_AS(sqrt_field(sigma_excess(2, 1.0, Grid3::cube(32, 8.0))), PreconditionError);
  CHECK_THROWS_AS(eigen_densities(sigma_excess(2, 1.0, Grid3::cube(32, 8.0))), PreconditionError);
}

TEST_CASE("eigenvalue regularity") {
  SUBCASE("diagonal reduces to the spin components") {
    const SpinDensityField r(gaussian_density(Grid3::cube(48, 8.0), {0, 0, 0}, 1.0),
                             gaussian_density(Grid3::cube(48, 8.0), {0, 0, 0}, 2.0),
                             ComplexField(Grid3::cube(48, 8.0)), 2);
    const ConditionResult c = corollary_check(r);
    const CheckReport rep = check(r);
    CHECK(c.id == "corollary");
    CHECK(c.verdict == Verdict::Pass);
    // width 1 dominates everywhere near the centre; both spins are Gaussians so
    // the eigen norms bracket the spin norms
    const double h_up = rep.condition("d").value("h1_sqrt_rho_up");
    CHECK(h_up == doctest::Approx(1.5).epsilon(0.01));
    CHECK(std::isfinite(c.value("h1_sqrt_rho_plus")));
    CHECK(std::isfinite(c.value("h1_sqrt_rho_minus")));
  }
  SUBCASE("rank one has a vanishing lower eigenvalue") {
    const ConditionResult c = corollary_check(rank1_two_lobe({}, Grid3::cube(48, 11.0)));
    CHECK(c.verdict == Verdict::Pass);
    CHECK(c.value("h1_sqrt_rho_minus") <= 1e-6);
  }
  SUBCASE("smooth mixture is refinement-stable") {
    const MixtureParams p;
    const ConditionResult c =
        corollary_check(full_rank_mixture(p, Grid3::cube(48, 6.25)), full_rank_mixture(p, Grid3::cube(64, 6.25)));
    CHECK(c.refinement_checked);
    CHECK(c.verdict == Verdict::Pass);
    CHECK(c.max_rel_change < 0.05);
  }
}
