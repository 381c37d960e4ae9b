#include <doctest.h>

#include <cmath>
#include <string>

#include "sdrep/check.hpp"
#include "sdrep/density_gen.hpp"
#include "sdrep/error.hpp"

using namespace sdrep;

namespace {

std::string failing(const CheckReport& rep) {
  std::string ids;
  for (const auto& c : rep.conditions)
    if (c.verdict == Verdict::Fail) ids += c.id;
  return ids;
}

}  // namespace

TEST_CASE("passing two-Gaussian density") {
  const SpinDensityField r = gaussian_diagonal(2, 1.0, Grid3::cube(48, 8.0));
  const CheckReport rep = check(r);
  REQUIRE(rep.conditions.size() == 7);
  const char* ids = "abcdefg";
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(rep.conditions[i].id == std::string(1, ids[i]));
    CHECK(rep.conditions[i].verdict == Verdict::Pass);
  }
  CHECK(rep.overall == Verdict::Pass);
  CHECK_FALSE(rep.boundary_warning);
  CHECK(rep.condition("d").note == "finite at this resolution");
}

TEST_CASE("negative lobe fails the sign condition with its location") {
  const Grid3 g = Grid3::cube(40, 9.5);
  const CheckReport rep = check(negative_lobe(2, 1.0, g));
  CHECK(failing(rep) == "a");
  const auto& a = rep.condition("a");
  REQUIRE(a.worst.has_value());
  // the negative lobe sits at x = -1.5
  CHECK(g.coord(Axis::X, a.worst->ix) == doctest::Approx(-1.5).epsilon(0.2));
  CHECK(a.value("min_rho_up") < 0.0);
}

TEST_CASE("sigma excess fails the determinant condition") {
  const CheckReport rep = check(sigma_excess(2, 1.0, Grid3::cube(40, 8.0)));
  CHECK(failing(rep) == "b");
  CHECK(rep.condition("b").worst.has_value());
}

TEST_CASE("spinless conditions") {
  const Grid3 g = Grid3::cube(48, 8.0);
  const ScalarField rho = gaussian_density(g, {0, 0, 0}, 1.0);
  CHECK(check_spinless(rho, 1).overall == Verdict::Pass);

  ScalarField heavy = rho;
  heavy *= 1.5;
  const CheckReport rep = check_spinless(heavy, 2);
  CHECK(failing(rep) == "c");
  CHECK(rep.condition("c").value("deviation") == doctest::Approx(-0.5).epsilon(1e-8));
}

TEST_CASE("a jump in the density is caught by refinement") {
  // sqrt(rho) jumps at x = 0; its discrete H1 norm grows like 1/h
  const SpinDensityField c = step_density(1, 1.0, Grid3::cube(33, 8.0));
  const SpinDensityField f = step_density(1, 1.0, Grid3::cube(65, 8.0));
  const CheckReport single = check(c);
  CHECK(single.condition("d").verdict == Verdict::Pass);
  const CheckReport rep = check(c, f);
  const auto& d = rep.condition("d");
  CHECK(d.verdict == Verdict::Fail);
  CHECK(d.note == "not refinement-stable");
  CHECK(d.refined_values[0].second > 1.05 * d.values[0].second);
  CHECK(rep.overall == Verdict::Fail);
}

TEST_CASE("smooth density is refinement-stable") {
  const MixtureParams p;
  const CheckReport rep =
      check(full_rank_mixture(p, Grid3::cube(48, 6.25)), full_rank_mixture(p, Grid3::cube(64, 6.25)));
  CHECK(rep.overall == Verdict::Pass);
  for (const char* id : {"d", "e", "f", "g"}) {
    CHECK(rep.condition(id).refinement_checked);
    CHECK(rep.condition(id).note == "refinement-stable");
  }
}

TEST_CASE("spin swap leaves the verdicts and norms unchanged") {
  const SpinDensityField r = full_rank_mixture({}, Grid3::cube(40, 6.25));
  const CheckReport a = check(r), b = check(spin_swap(r));
  for (std::size_t i = 0; i < a.conditions.size(); ++i) {
    CHECK(a.conditions[i].verdict == b.conditions[i].verdict);
  }
  const auto& da = a.condition("d");
  const auto& db = b.condition("d");
  CHECK(std::abs(da.value("h1_sqrt_rho_up") - db.value("h1_sqrt_rho_dn")) <= 1e-12 * da.value("h1_sqrt_rho_up"));
  CHECK(std::abs(da.value("h1_sqrt_rho_dn") - db.value("h1_sqrt_rho_up")) <= 1e-12 * da.value("h1_sqrt_rho_dn"));
  for (const char* id : {"c", "e", "f", "g"})
    for (std::size_t i = 0; i < a.condition(id).values.size(); ++i) {
      const double x = a.condition(id).values[i].second, y = b.condition(id).values[i].second;
      CHECK(std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)));
    }
}

TEST_CASE("tightening tol.neg never turns a fail into a pass") {
  SpinDensityField r = gaussian_diagonal(2, 1.0, Grid3::cube(24, 8.0));
  const double m = r.max_total();
  r.rho_up[100] = -3e-9 * m;
  r.rho_dn[200] = -4e-11 * m;
  bool failed = false;
  for (double neg : {1e-6, 1e-8, 5e-9, 1e-9, 1e-10, 1e-11, 1e-12}) {
    ToleranceConfig tol;
    tol.neg_rel = neg;
    const bool pass = check(r, tol).condition("a").verdict == Verdict::Pass;
    if (failed) CHECK_FALSE(pass);
    failed = failed || !pass;
  }
  CHECK(failed);
}

TEST_CASE("heavy masking makes the weighted conditions indeterminate") {
  const SpinDensityField r = full_rank_mixture({}, Grid3::cube(32, 6.25));
  ToleranceConfig tol;
  tol.floor_rel = 0.5;  // masks most of the support
  const CheckReport rep = check(r, tol);
  CHECK(rep.condition("f").verdict == Verdict::Indeterminate);
  CHECK(rep.condition("g").verdict == Verdict::Indeterminate);
  CHECK(rep.condition("f").masked_significant > rep.grid_points / 100);
  CHECK(rep.overall == Verdict::Indeterminate);
}

TEST_CASE("boundary mass triggers the warning") {
  SpinDensityField r(Grid3::cube(16, 2.0), 1);
  r = SpinDensityField(gaussian_density(r.grid(), {0, 0, 0}, 1.0), ScalarField(r.grid()),
                       ComplexField(r.grid()), 1);
  CHECK(check(r).boundary_warning);
}

TEST_CASE("tolerances are validated") {
  const SpinDensityField r = gaussian_diagonal(2, 1.0, Grid3::cube(16, 8.0));
  for (double ToleranceConfig::*field :
       {&ToleranceConfig::neg_rel, &ToleranceConfig::norm_rel, &ToleranceConfig::floor_rel,
        &ToleranceConfig::refine_threshold, &ToleranceConfig::indeterminate_fraction}) {
    ToleranceConfig tol;
    tol.*field = 0.0;
    CHECK_THROWS_AS(check(r, tol), InvalidArgument);
    tol.*field = -1.0;
    CHECK_THROWS_AS(check(r, tol), InvalidArgument);
  }
}

TEST_CASE("relative change") {
  CHECK(relative_change(0.0, 0.0) == 0.0);
  CHECK(std::isinf(relative_change(0.0, 1.0)));
  CHECK(relative_change(2.0, 2.1) == doctest::Approx(0.05));
}
