#include "sdrep/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sdrep/error.hpp"

namespace sdrep {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Line-oriented reader for the text headers; errors name the line.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError(source_ + ": line " + std::to_string(line_) + ": " + msg);
  }

  /// Next line, split on whitespace; the first token must be `key`.
  std::vector<std::string> expect(const std::string& key, std::size_t args) {
    std::string text;
    ++line_;
    if (!std::getline(in_, text)) fail("unexpected end of header, expected '" + key + "'");
    if (!text.empty() && text.back() == '\r') text.pop_back();
    std::istringstream ss(text);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty() || tok[0] != key) fail("expected '" + key + "'");
    if (tok.size() != args + 1)
      fail("'" + key + "' takes " + std::to_string(args) + " value(s)");
    return tok;
  }

  /// Next line as `key rest-of-line`.
  std::string expect_text(const std::string& key) {
    std::string text;
    ++line_;
    if (!std::getline(in_, text)) fail("unexpected end of header, expected '" + key + "'");
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.rfind(key + " ", 0) != 0) fail("expected '" + key + "'");
    return text.substr(key.size() + 1);
  }

  template <class T>
  T number(const std::string& s) const {
    T v{};
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail("bad number '" + s + "'");
    return v;
  }

 private:
  std::istream& in_;
  std::string source_;
  int line_ = 0;
};

void check_version(LineReader& rd, const std::string& magic) {
  const auto tok = rd.expect(magic, 1);
  const int version = rd.number<int>(tok[1]);
  if (version != 1)
    throw UnsupportedVersionError(magic + " version " + std::to_string(version) +
                                  " is not supported (expected 1)");
}

void write_grid(std::ostream& out, const Grid3& g) {
  out << "grid " << g.nx() << ' ' << g.ny() << ' ' << g.nz() << '\n';
  out << "box";
  for (double v : g.lo()) out << ' ' << fmt17(v);
  for (double v : g.hi()) out << ' ' << fmt17(v);
  out << '\n';
}

Grid3 read_grid(LineReader& rd) {
  const auto gt = rd.expect("grid", 3);
  std::array<std::size_t, 3> dims{};
  for (std::size_t i = 0; i < 3; ++i) {
    const long v = rd.number<long>(gt[i + 1]);
    if (v < 4) rd.fail("grid dimensions must be at least 4");
    dims[i] = static_cast<std::size_t>(v);
  }
  const auto bt = rd.expect("box", 6);
  std::array<double, 3> lo{}, hi{};
  for (std::size_t i = 0; i < 3; ++i) {
    lo[i] = rd.number<double>(bt[i + 1]);
    hi[i] = rd.number<double>(bt[i + 4]);
  }
  try {
    return Grid3(dims, lo, hi);
  } catch (const InvalidArgument& e) {
    rd.fail(e.what());
  }
}

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

template <class It>
void write_doubles(std::ostream& out, It first, It last) {
  std::vector<char> buf;
  buf.reserve(static_cast<std::size_t>(std::distance(first, last)) * 8);
  for (; first != last; ++first) {
    const std::uint64_t u = to_le(std::bit_cast<std::uint64_t>(static_cast<double>(*first)));
    char b[8];
    std::memcpy(b, &u, 8);
    buf.insert(buf.end(), b, b + 8);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::vector<double> read_doubles(std::istream& in, std::size_t n, std::size_t expected_total,
                                 const std::string& source) {
  std::vector<char> buf(n * 8);
  in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size())
    throw SizeMismatchError(source + ": payload is truncated (expected " +
                            std::to_string(expected_total) + " bytes)");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t u;
    std::memcpy(&u, buf.data() + 8 * i, 8);
    out[i] = std::bit_cast<double>(to_le(u));
  }
  return out;
}

void require_end(std::istream& in, const std::string& source) {
  if (in.peek() != std::char_traits<char>::eof())
    throw SizeMismatchError(source + ": payload is longer than the header declares");
}

void write_complex_pair(std::ostream& out, const ComplexField& a, const ComplexField& b) {
  for (const ComplexField* f : {&a, &b}) {
    std::vector<double> re(f->size()), im(f->size());
    for (std::size_t k = 0; k < f->size(); ++k) {
      re[k] = (*f)[k].real();
      im[k] = (*f)[k].imag();
    }
    write_doubles(out, re.begin(), re.end());
    write_doubles(out, im.begin(), im.end());
  }
}

ComplexField read_complex(std::istream& in, const Grid3& g, std::size_t total,
                          const std::string& source) {
  const auto re = read_doubles(in, g.size(), total, source);
  const auto im = read_doubles(in, g.size(), total, source);
  ComplexField f(g);
  for (std::size_t k = 0; k < g.size(); ++k) f[k] = cplx(re[k], im[k]);
  return f;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw FormatError("cannot open " + p.string() + " for writing");
  return out;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FormatError("cannot open " + p.string());
  return in;
}

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

}  // namespace

void write_spdf(const SpinDensityField& r, std::ostream& out) {
  out << "spdf 1\n";
  write_grid(out, r.grid());
  out << "electrons " << r.n_electrons << '\n' << "data\n";
  write_doubles(out, r.rho_up.values().begin(), r.rho_up.values().end());
  write_doubles(out, r.rho_dn.values().begin(), r.rho_dn.values().end());
  std::vector<double> re(r.sigma.size()), im(r.sigma.size());
  for (std::size_t k = 0; k < re.size(); ++k) {
    re[k] = r.sigma[k].real();
    im[k] = r.sigma[k].imag();
  }
  write_doubles(out, re.begin(), re.end());
  write_doubles(out, im.begin(), im.end());
  if (!out) throw FormatError("write failed");
}

void write_spdf(const SpinDensityField& r, const fs::path& path) {
  auto out = open_out(path);
  write_spdf(r, out);
}

namespace {

SpinDensityField read_spdf_named(std::istream& in, const std::string& source) {
  LineReader rd(in, source);
  check_version(rd, "spdf");
  const Grid3 g = read_grid(rd);
  const auto et = rd.expect("electrons", 1);
  const int n = rd.number<int>(et[1]);
  if (n <= 0) rd.fail("electron count must be positive");
  rd.expect("data", 0);

  const std::size_t total = 4 * g.size() * 8;
  const auto up = read_doubles(in, g.size(), total, source);
  const auto dn = read_doubles(in, g.size(), total, source);
  ComplexField sigma = read_complex(in, g, total, source);
  require_end(in, source);
  return SpinDensityField(ScalarField(g, up), ScalarField(g, dn), std::move(sigma), n);
}

}  // namespace

SpinDensityField read_spdf(std::istream& in) { return read_spdf_named(in, "spdf"); }

SpinDensityField read_spdf(const fs::path& path) {
  auto in = open_in(path);
  return read_spdf_named(in, path.string());
}

SpinDensityField sqrt_as_spdf(const SqrtField& root, int n) {
  return SpinDensityField(root.r_up, root.r_dn, root.s, n);
}

namespace {

void write_orbital(const Spinor& s, const fs::path& p) {
  auto out = open_out(p);
  out << "sdorb 1\n";
  write_grid(out, s.up.grid());
  out << "k " << s.k << '\n' << "data\n";
  write_complex_pair(out, s.up, s.dn);
  if (!out) throw FormatError("write failed: " + p.string());
}

Spinor read_orbital(const fs::path& p, const Grid3& expected) {
  auto in = open_in(p);
  LineReader rd(in, p.string());
  check_version(rd, "sdorb");
  const Grid3 g = read_grid(rd);
  if (g != expected) rd.fail("orbital grid differs from the manifest grid");
  const int k = rd.number<int>(rd.expect("k", 1)[1]);
  rd.expect("data", 0);
  const std::size_t total = 4 * g.size() * 8;
  Spinor s{read_complex(in, g, total, p.string()), ComplexField(g), k};
  s.dn = read_complex(in, g, total, p.string());
  require_end(in, p.string());
  return s;
}

void write_phase(const PhaseFunction& ph, const fs::path& p) {
  auto out = open_out(p);
  out << "sdphase 1\n"
      << "axis " << axis_name(ph.axis) << '\n'
      << "nodes " << ph.f.size() << '\n'
      << "h " << fmt17(ph.h) << '\n'
      << "renorm_adjust " << fmt17(ph.renorm_adjust) << '\n'
      << "data\n";
  for (const auto* v : {&ph.marginal, &ph.f_prime, &ph.f, &ph.theta, &ph.theta_prime})
    write_doubles(out, v->begin(), v->end());
  if (!out) throw FormatError("write failed: " + p.string());
}

PhaseFunction read_phase(const fs::path& p) {
  auto in = open_in(p);
  LineReader rd(in, p.string());
  check_version(rd, "sdphase");
  PhaseFunction ph;
  const std::string ax = rd.expect("axis", 1)[1];
  if (ax == "x")
    ph.axis = Axis::X;
  else if (ax == "y")
    ph.axis = Axis::Y;
  else if (ax == "z")
    ph.axis = Axis::Z;
  else
    rd.fail("axis must be x, y or z");
  const auto nodes = rd.number<std::size_t>(rd.expect("nodes", 1)[1]);
  ph.h = rd.number<double>(rd.expect("h", 1)[1]);
  ph.renorm_adjust = rd.number<double>(rd.expect("renorm_adjust", 1)[1]);
  rd.expect("data", 0);
  const std::size_t total = 5 * nodes * 8;
  for (auto* v : {&ph.marginal, &ph.f_prime, &ph.f, &ph.theta, &ph.theta_prime})
    *v = read_doubles(in, nodes, total, p.string());
  require_end(in, p.string());
  return ph;
}

}  // namespace

void write_witness(const Witness& w, const fs::path& dir) {
  fs::create_directories(dir);
  auto out = open_out(dir / "witness.txt");
  out << "witness 1\n";
  write_grid(out, w.grid);
  out << "electrons " << w.n_electrons << '\n' << "branches " << w.branches.size() << '\n';
  for (std::size_t b = 0; b < w.branches.size(); ++b) {
    const Branch& br = w.branches[b];
    const std::string stem = "branch" + std::to_string(b);
    out << "branch " << b << '\n'
        << "weight " << fmt17(br.weight) << '\n'
        << "swap " << (br.spin_swapped ? 1 : 0) << '\n'
        << "label " << (br.label.empty() ? "-" : br.label) << '\n'
        << "fallback_points " << br.orbitals.fallback_points << '\n';
    if (br.orbitals.phase) {
      const std::string name = stem + "_phase.bin";
      write_phase(*br.orbitals.phase, dir / name);
      out << "phase " << name << '\n';
    } else {
      out << "phase none\n";
    }
    out << "orbitals " << br.orbitals.size() << '\n';
    for (std::size_t i = 0; i < br.orbitals.size(); ++i) {
      const std::string name = stem + "_orb" + std::to_string(i + 1) + ".bin";
      write_orbital(br.orbitals.orbitals[i], dir / name);
      out << "orbital " << (i + 1) << ' ' << name << '\n';
    }
  }
  if (!out) throw FormatError("write failed: " + (dir / "witness.txt").string());
}

Witness read_witness(const fs::path& dir) {
  const fs::path manifest = dir / "witness.txt";
  auto in = open_in(manifest);
  LineReader rd(in, manifest.string());
  check_version(rd, "witness");
  Witness w{read_grid(rd), 0, {}};
  w.n_electrons = rd.number<int>(rd.expect("electrons", 1)[1]);
  if (w.n_electrons <= 0) rd.fail("electron count must be positive");
  const auto nb = rd.number<std::size_t>(rd.expect("branches", 1)[1]);
  for (std::size_t b = 0; b < nb; ++b) {
    if (rd.number<std::size_t>(rd.expect("branch", 1)[1]) != b) rd.fail("branches out of order");
    Branch br;
    br.weight = rd.number<double>(rd.expect("weight", 1)[1]);
    br.spin_swapped = rd.number<int>(rd.expect("swap", 1)[1]) != 0;
    br.label = rd.expect_text("label");
    if (br.label == "-") br.label.clear();
    br.orbitals.fallback_points = rd.number<std::size_t>(rd.expect("fallback_points", 1)[1]);
    const std::string phase = rd.expect("phase", 1)[1];
    if (phase != "none") {
      br.orbitals.phase = read_phase(dir / phase);
      if (br.orbitals.phase->f.size() != w.grid.n(br.orbitals.phase->axis))
        rd.fail("phase file does not match the grid");
    }
    const auto no = rd.number<std::size_t>(rd.expect("orbitals", 1)[1]);
    for (std::size_t i = 0; i < no; ++i) {
      const auto tok = rd.expect("orbital", 2);
      br.orbitals.orbitals.push_back(read_orbital(dir / tok[2], w.grid));
    }
    w.branches.push_back(std::move(br));
  }
  return w;
}

}  // namespace sdrep
