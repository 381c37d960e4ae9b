#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sdrep/error.hpp"
#include "sdrep/field.hpp"

using namespace sdrep;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField normalized_gaussian(const Grid3& g, double a) {
  const double norm = std::pow(kPi * a * a, -1.5);
  return ScalarField::sample(g, [&](double x, double y, double z) {
    return norm * std::exp(-(x * x + y * y + z * z) / (a * a));
  });
}

double max_gradient_error(std::size_t n, Stencil s) {
  const Grid3 g = Grid3::cube(n, 4.0);
  const ScalarField f = ScalarField::sample(
      g, [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z)); });
  const auto d = gradient(f, s);
  const ScalarField exact = ScalarField::sample(g, [](double x, double y, double z) {
    return -2.0 * x * std::exp(-(x * x + y * y + z * z));
  });
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) err = std::max(err, std::abs(d[0][k] - exact[k]));
  return err;
}

}  // namespace

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(Grid3({3, 4, 4}, {0, 0, 0}, {1, 1, 1}), InvalidArgument);
  CHECK_THROWS_AS(Grid3({4, 4, 4}, {0, 0, 0}, {1, 0, 1}), InvalidArgument);
  const Grid3 g({5, 6, 7}, {-1, 0, 2}, {1, 5, 3});
  CHECK(g.spacing(Axis::X) == doctest::Approx(0.5));
  CHECK(g.spacing(Axis::Y) == doctest::Approx(1.0));
  CHECK(g.size() == 210);
  for (std::size_t k : {0ul, 17ul, 209ul}) {
    const GridIndex i = g.unflat(k);
    CHECK(g.flat(i.ix, i.iy, i.iz) == k);
  }
  // iz fastest
  CHECK(g.flat(0, 0, 1) == 1);
  CHECK(g.flat(0, 1, 0) == 7);
  CHECK(g.on_boundary(0));
  CHECK_FALSE(g.on_boundary(g.flat(2, 2, 2)));
}

TEST_CASE("gradient of a constant vanishes") {
  const Grid3 g = Grid3::cube(8, 1.0);
  const ScalarField f = ScalarField::sample(g, [](double, double, double) { return 3.5; });
  for (Stencil s : {Stencil::Central2, Stencil::Central4})
    for (const auto& comp : gradient(f, s))
      for (double v : comp.values()) CHECK(v == 0.0);
}

TEST_CASE("gradient is exact on affine fields") {
  const Grid3 g = Grid3::cube(8, 1.0);
  const ScalarField f = ScalarField::sample(
      g, [](double x, double y, double z) { return 2.0 * x - 3.0 * y + 0.5 * z + 1.0; });
  for (Stencil s : {Stencil::Central2, Stencil::Central4}) {
    const auto d = gradient(f, s);
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(std::abs(d[0][k] - 2.0) <= 1e-12);
      CHECK(std::abs(d[1][k] + 3.0) <= 1e-12);
      CHECK(std::abs(d[2][k] - 0.5) <= 1e-12);
    }
  }
  const ScalarField x = ScalarField::sample(g, [](double x, double, double) { return x; });
  const auto dx = gradient(x);
  for (double v : dx[0].values()) CHECK(std::abs(v - 1.0) <= 1e-12);
}

TEST_CASE("1D derivative is exact on quadratics") {
  std::vector<double> f(9);
  const double h = 0.25;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = -1.0 + h * static_cast<double>(i);
    f[i] = 3.0 * x * x - x + 2.0;
  }
  for (Stencil s : {Stencil::Central2, Stencil::Central4}) {
    const auto d = derivative_1d(f, h, s);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double x = -1.0 + h * static_cast<double>(i);
      CHECK(std::abs(d[i] - (6.0 * x - 1.0)) <= 1e-12);
    }
  }
}

TEST_CASE("gradient convergence orders against the analytic Gaussian gradient") {
  const double e2_32 = max_gradient_error(32, Stencil::Central2);
  const double e2_64 = max_gradient_error(64, Stencil::Central2);
  const double ratio2 = e2_32 / e2_64;
  CHECK(ratio2 > 3.0);
  CHECK(ratio2 < 5.5);

  const double e4_32 = max_gradient_error(32, Stencil::Central4);
  const double e4_64 = max_gradient_error(64, Stencil::Central4);
  CHECK(e4_32 / e4_64 > 10.0);
  CHECK(e4_64 < e2_64);
}

TEST_CASE("trapezoid quadrature") {
  const Grid3 g = Grid3::cube(64, 8.0);
  CHECK(integrate(ScalarField(g)) == 0.0);
  const ScalarField rho = normalized_gaussian(g, 1.0);
  // analytic normalization of the Gaussian
  CHECK(std::abs(integrate(rho) - 1.0) <= 1e-10);

  ScalarField scaled = rho;
  scaled *= 2.5;
  CHECK(integrate(scaled) == doctest::Approx(2.5 * integrate(rho)).epsilon(1e-14));

  const ScalarField other = ScalarField::sample(
      g, [](double x, double y, double z) { return std::exp(-(x * x + 2 * y * y + 0.5 * z * z)); });
  ScalarField combo(g);
  for (std::size_t k = 0; k < g.size(); ++k) combo[k] = 0.7 * rho[k] - 1.3 * other[k];
  const double lin = 0.7 * integrate(rho) - 1.3 * integrate(other);
  CHECK(std::abs(integrate(combo) - lin) <= 1e-12 * std::abs(lin));
}

TEST_CASE("transverse integral matches the analytic marginal") {
  const Grid3 g = Grid3::cube(48, 7.0);
  const ScalarField rho = normalized_gaussian(g, 1.0);
  const auto m = transverse_integral(rho, Axis::Y);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double y = g.coord(Axis::Y, i);
    CHECK(std::abs(m[i] - std::exp(-y * y) / std::sqrt(kPi)) <= 1e-10);
  }
}

TEST_CASE("pairwise summation") {
  std::vector<double> v(1000003, 0.1);
  const double s = pairwise_sum(v);
  CHECK(std::abs(s - 100000.3) <= 1e-8);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
  CHECK(pairwise_sum(v) == s);
}

TEST_CASE("Lp norms") {
  const Grid3 g = Grid3::cube(64, 8.0);
  for (double p : {1.0, 1.5, 2.0}) CHECK(lp_norm(ScalarField(g), p) == 0.0);
  CHECK_THROWS_AS(lp_norm(ScalarField(g), 0.5), InvalidArgument);

  ScalarField rho = normalized_gaussian(g, 1.0);
  rho *= 3.0;
  CHECK(std::abs(lp_norm(rho, 1.0) - 3.0) <= 1e-10);
  const ScalarField root = rho.map([](double v) { return std::sqrt(v); });
  CHECK(std::abs(lp_norm(root, 2.0) - std::sqrt(3.0)) <= 1e-10);

  CHECK(sobolev_norm(ScalarField(g), 1.5) == 0.0);
  CHECK(sobolev_norm(ComplexField(g), 1.5) == 0.0);
}

TEST_CASE("weighted gradient integral") {
  const Grid3 g = Grid3::cube(48, 8.0);
  const ScalarField rho = normalized_gaussian(g, 1.0);
  const double mx = max_value(rho);

  SUBCASE("constant numerator") {
    const ScalarField c = ScalarField::sample(g, [](double, double, double) { return 2.0; });
    CHECK(weighted_gradient_l1(c, rho, 1e-12 * mx).value == 0.0);
  }

  SUBCASE("floor sweep is stable") {
    const ScalarField f = rho.map([](double v) { return std::sqrt(v) * v; });
    const double ref = weighted_gradient_l1(f, rho, 1e-10 * mx).value;
    CHECK(std::isfinite(ref));
    CHECK(ref > 0.0);
    for (double fl : {1e-11, 1e-12, 1e-13, 1e-14}) {
      const double v = weighted_gradient_l1(f, rho, fl * mx).value;
      CHECK(std::abs(v - ref) / ref < 0.01);
    }
  }

  SUBCASE("fully masked") {
    const ScalarField f = rho.map([](double v) { return v; });
    const WeightedIntegral w = weighted_gradient_l1(f, ScalarField(g), 1e-12);
    CHECK(w.value == 0.0);
    CHECK(w.masked == g.size());
  }

  SUBCASE("floor must be positive") {
    CHECK_THROWS_AS(weighted_gradient_l1(rho, rho, 0.0), InvalidArgument);
    CHECK_THROWS_AS(weighted_gradient_l1(rho, rho, -1.0), InvalidArgument);
  }
}

TEST_CASE("grid mismatch is rejected") {
  const Grid3 a = Grid3::cube(8, 1.0), b = Grid3::cube(8, 2.0);
  CHECK_THROWS_AS(require_same_grid(a, b, "test"), InvalidArgument);
  CHECK_THROWS_AS(weighted_gradient_l1(ScalarField(a), ScalarField(b), 1.0), InvalidArgument);
}
