#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "sdrep/decompose.hpp"
#include "sdrep/density_gen.hpp"
#include "sdrep/error.hpp"
#include "sdrep/io.hpp"
#include "sdrep/matrix_sqrt.hpp"

using namespace sdrep;
namespace fs = std::filesystem;

namespace {

SpinDensityField random_field() {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  const Grid3 g({4, 5, 6}, {-1.5, -2.0, 0.25}, {1.5, 3.0, 1.0 / 3.0 + 1.0});
  SpinDensityField r(g, 3);
  for (std::size_t k = 0; k < g.size(); ++k) {
    r.rho_up[k] = nd(rng);
    r.rho_dn[k] = nd(rng) * 1e-300;
    r.sigma[k] = cplx(nd(rng), -nd(rng));
  }
  return r;
}

std::string serialized(const SpinDensityField& r) {
  std::ostringstream out;
  write_spdf(r, out);
  return out.str();
}

std::string format_error(const std::string& text) {
  std::istringstream in(text);
  try {
    (void)read_spdf(in);
  } catch (const FormatError& e) {
    return e.what();
  }
  return {};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("sdrep_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("SPDF round trip is bit-exact") {
  const SpinDensityField r = random_field();
  std::istringstream in(serialized(r));
  const SpinDensityField back = read_spdf(in);
  CHECK(back.grid() == r.grid());
  CHECK(back.n_electrons == 3);
  CHECK(back.rho_up == r.rho_up);
  CHECK(back.rho_dn == r.rho_dn);
  CHECK(back.sigma == r.sigma);
  CHECK(serialized(back) == serialized(r));
}

TEST_CASE("SPDF header") {
  const std::string text = serialized(random_field());
  CHECK(text.rfind("spdf 1\ngrid 4 5 6\n", 0) == 0);
  CHECK(text.find("electrons 3\ndata\n") != std::string::npos);
  // rho_up, rho_dn, Re sigma, Im sigma: 120 doubles each
  const std::size_t header = text.find("data\n") + 5;
  CHECK(text.size() - header == 4 * 120 * 8);
}

TEST_CASE("SPDF errors") {
  const std::string good = serialized(random_field());

  SUBCASE("grid too small names the line") {
    std::string bad = good;
    bad.replace(bad.find("grid 4 5 6"), 10, "grid 0 4 4");
    const std::string msg = format_error(bad);
    CHECK(msg.find("line 2") != std::string::npos);
  }
  SUBCASE("bad magic") {
    const std::string msg = format_error("spdx 1\n" + good.substr(good.find('\n') + 1));
    CHECK(msg.find("line 1") != std::string::npos);
  }
  SUBCASE("malformed number") {
    std::string bad = good;
    bad.replace(bad.find("electrons 3"), 11, "electrons x");
    CHECK(format_error(bad).find("line 4") != std::string::npos);
  }
  SUBCASE("truncated payload") {
    std::istringstream in(good.substr(0, good.size() - 8));
    CHECK_THROWS_AS(read_spdf(in), SizeMismatchError);
  }
  SUBCASE("trailing payload") {
    std::istringstream in(good + "12345678");
    CHECK_THROWS_AS(read_spdf(in), SizeMismatchError);
  }
  SUBCASE("unsupported version") {
    std::istringstream in("spdf 2\n" + good.substr(good.find('\n') + 1));
    CHECK_THROWS_AS(read_spdf(in), UnsupportedVersionError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_spdf(fs::path("/nonexistent/dir/x.spdf")), FormatError);
  }
}

TEST_CASE("SPDF through the filesystem") {
  TempDir tmp;
  const SpinDensityField r = full_rank_mixture({}, Grid3::cube(16, 8.0));
  write_spdf(r, tmp.path / "m.spdf");
  const SpinDensityField back = read_spdf(tmp.path / "m.spdf");
  CHECK(back.rho_up == r.rho_up);
  CHECK(back.sigma == r.sigma);
}

TEST_CASE("square root container") {
  const SpinDensityField r = full_rank_mixture({}, Grid3::cube(16, 8.0));
  const SqrtField root = sqrt_field(r);
  const SpinDensityField s = sqrt_as_spdf(root, 2);
  CHECK(s.rho_up == root.r_up);
  CHECK(s.rho_dn == root.r_dn);
  CHECK(s.sigma == root.s);
}

TEST_CASE("witness round trip is bit-exact") {
  TempDir tmp;
  ConstructOptions opt;
  opt.harriman.orthogonalize = true;
  const Witness w = construct_witness(full_rank_mixture({}, Grid3::cube(24, 8.0)), opt);
  write_witness(w, tmp.path / "w");
  CHECK(fs::exists(tmp.path / "w" / "witness.txt"));
  const Witness back = read_witness(tmp.path / "w");

  CHECK(back.grid == w.grid);
  CHECK(back.n_electrons == w.n_electrons);
  REQUIRE(back.branches.size() == w.branches.size());
  for (std::size_t b = 0; b < w.branches.size(); ++b) {
    const Branch& x = w.branches[b];
    const Branch& y = back.branches[b];
    CHECK(y.weight == x.weight);
    CHECK(y.label == x.label);
    CHECK(y.spin_swapped == x.spin_swapped);
    CHECK(y.orbitals.fallback_points == x.orbitals.fallback_points);
    REQUIRE(y.orbitals.size() == x.orbitals.size());
    for (std::size_t i = 0; i < x.orbitals.size(); ++i) {
      CHECK(y.orbitals.orbitals[i].k == x.orbitals.orbitals[i].k);
      CHECK(y.orbitals.orbitals[i].up == x.orbitals.orbitals[i].up);
      CHECK(y.orbitals.orbitals[i].dn == x.orbitals.orbitals[i].dn);
    }
    REQUIRE(y.orbitals.phase.has_value() == x.orbitals.phase.has_value());
    if (x.orbitals.phase) {
      CHECK(y.orbitals.phase->axis == x.orbitals.phase->axis);
      CHECK(y.orbitals.phase->h == x.orbitals.phase->h);
      CHECK(y.orbitals.phase->theta == x.orbitals.phase->theta);
      CHECK(y.orbitals.phase->theta_prime == x.orbitals.phase->theta_prime);
    }
  }
  CHECK(kinetic_energy(back) == kinetic_energy(w));
}

TEST_CASE("witness reader errors") {
  TempDir tmp;
  CHECK_THROWS_AS(read_witness(tmp.path / "missing"), FormatError);
  {
    std::ofstream out(tmp.path / "witness.txt");
    out << "witness 7\n";
  }
  CHECK_THROWS_AS(read_witness(tmp.path), UnsupportedVersionError);
}
