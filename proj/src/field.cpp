#include "sdrep/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdrep/error.hpp"

namespace sdrep {

Grid3::Grid3(std::array<std::size_t, 3> dims, std::array<double, 3> lo,
             std::array<double, 3> hi)
    : dims_(dims), lo_(lo), hi_(hi) {
  for (std::size_t a = 0; a < 3; ++a) {
    if (dims_[a] < 4)
      throw InvalidArgument("grid: every dimension needs at least 4 nodes, got " +
                            std::to_string(dims_[a]));
    if (!(hi_[a] > lo_[a]) || !std::isfinite(lo_[a]) || !std::isfinite(hi_[a]))
      throw InvalidArgument("grid: box upper bound must exceed lower bound");
    h_[a] = (hi_[a] - lo_[a]) / static_cast<double>(dims_[a] - 1);
  }
}

Grid3 Grid3::cube(std::size_t n, double half_width) {
  return cube(n, -half_width, half_width);
}

Grid3 Grid3::cube(std::size_t n, double lo, double hi) {
  return Grid3({n, n, n}, {lo, lo, lo}, {hi, hi, hi});
}

GridIndex Grid3::unflat(std::size_t k) const {
  GridIndex g;
  g.iz = k % dims_[2];
  k /= dims_[2];
  g.iy = k % dims_[1];
  g.ix = k / dims_[1];
  return g;
}

std::vector<double> Grid3::trapezoid_weights(Axis a) const {
  const std::size_t n = dims_[idx(a)];
  std::vector<double> w(n, h_[idx(a)]);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

bool Grid3::on_boundary(std::size_t k) const {
  const GridIndex g = unflat(k);
  return g.ix == 0 || g.iy == 0 || g.iz == 0 || g.ix + 1 == dims_[0] ||
         g.iy + 1 == dims_[1] || g.iz + 1 == dims_[2];
}

template <class T>
Field<T>::Field(Grid3 grid, std::vector<T> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw InvalidArgument("field: value count " + std::to_string(values_.size()) +
                          " does not match grid size " + std::to_string(grid_.size()));
}

template class Field<double>;
template class Field<cplx>;

double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kBlock = 64;
  if (v.size() <= kBlock) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

namespace {

// Derivative of a strided line of n samples into out (same stride).
template <class T>
void diff_line(const T* in, T* out, std::size_t n, std::size_t stride, double h,
               Stencil s) {
  auto f = [&](std::size_t i) { return in[i * stride]; };
  const double inv2h = 1.0 / (2.0 * h);
  out[0] = (-3.0 * f(0) + 4.0 * f(1) - f(2)) * inv2h;
  out[(n - 1) * stride] = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) * inv2h;
  if (s == Stencil::Central2 || n < 5) {
    for (std::size_t i = 1; i + 1 < n; ++i)
      out[i * stride] = (f(i + 1) - f(i - 1)) * inv2h;
    return;
  }
  out[stride] = (f(2) - f(0)) * inv2h;
  out[(n - 2) * stride] = (f(n - 1) - f(n - 3)) * inv2h;
  const double inv12h = 1.0 / (12.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i)
    out[i * stride] =
        (-f(i + 2) + 8.0 * f(i + 1) - 8.0 * f(i - 1) + f(i - 2)) * inv12h;
}

template <class T>
Gradient<T> gradient_impl(const Field<T>& f, Stencil s) {
  const Grid3& g = f.grid();
  Gradient<T> out{Field<T>(g), Field<T>(g), Field<T>(g)};
  const std::size_t nx = g.nx(), ny = g.ny(), nz = g.nz();
  const T* in = f.values().data();

  // x lines: stride ny*nz
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t iz = 0; iz < nz; ++iz) {
      const std::size_t base = g.flat(0, iy, iz);
      diff_line(in + base, out[0].values().data() + base, nx, ny * nz,
                g.spacing(Axis::X), s);
    }
  for (std::size_t ix = 0; ix < nx; ++ix)
    for (std::size_t iz = 0; iz < nz; ++iz) {
      const std::size_t base = g.flat(ix, 0, iz);
      diff_line(in + base, out[1].values().data() + base, ny, nz,
                g.spacing(Axis::Y), s);
    }
  for (std::size_t ix = 0; ix < nx; ++ix)
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const std::size_t base = g.flat(ix, iy, 0);
      diff_line(in + base, out[2].values().data() + base, nz, 1,
                g.spacing(Axis::Z), s);
    }
  return out;
}

template <class T>
std::vector<T> derivative_1d_impl(std::span<const T> f, double h, Stencil s) {
  if (f.size() < 4) throw InvalidArgument("derivative_1d: need at least 4 samples");
  std::vector<T> out(f.size());
  diff_line(f.data(), out.data(), f.size(), 1, h, s);
  return out;
}

double sq(double x) { return x * x; }
double sq(cplx z) { return std::norm(z); }

template <class T>
ScalarField grad_sq_impl(const Field<T>& f, Stencil s) {
  const auto g = gradient(f, s);
  ScalarField out(f.grid());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = sq(g[0][k]) + sq(g[1][k]) + sq(g[2][k]);
  return out;
}

// Product of the three trapezoid weights, in flat order.
std::vector<double> weighted_values(const ScalarField& f) {
  const Grid3& g = f.grid();
  const auto wx = g.trapezoid_weights(Axis::X);
  const auto wy = g.trapezoid_weights(Axis::Y);
  const auto wz = g.trapezoid_weights(Axis::Z);
  std::vector<double> v(f.size());
  std::size_t k = 0;
  for (std::size_t ix = 0; ix < g.nx(); ++ix)
    for (std::size_t iy = 0; iy < g.ny(); ++iy) {
      const double wxy = wx[ix] * wy[iy];
      for (std::size_t iz = 0; iz < g.nz(); ++iz, ++k) v[k] = wxy * wz[iz] * f[k];
    }
  return v;
}

template <class T>
double lp_norm_impl(const Field<T>& f, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must be >= 1");
  ScalarField a = f.map([p](const T& v) { return std::pow(std::abs(v), p); });
  return std::pow(integrate(a), 1.0 / p);
}

template <class T>
double sobolev_impl(const Field<T>& f, double p, Stencil s) {
  if (!(p >= 1.0)) throw InvalidArgument("sobolev_norm: p must be >= 1");
  const ScalarField gsq = gradient_norm_sq(f, s);
  ScalarField a = f.map([p](const T& v) { return std::pow(std::abs(v), p); });
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += std::pow(gsq[k], 0.5 * p);
  return std::pow(integrate(a), 1.0 / p);
}

}  // namespace

Gradient<double> gradient(const ScalarField& f, Stencil s) { return gradient_impl(f, s); }
Gradient<cplx> gradient(const ComplexField& f, Stencil s) { return gradient_impl(f, s); }

std::vector<double> derivative_1d(std::span<const double> f, double h, Stencil s) {
  return derivative_1d_impl(f, h, s);
}
std::vector<cplx> derivative_1d(std::span<const cplx> f, double h, Stencil s) {
  return derivative_1d_impl(f, h, s);
}

ScalarField gradient_norm_sq(const ScalarField& f, Stencil s) { return grad_sq_impl(f, s); }
ScalarField gradient_norm_sq(const ComplexField& f, Stencil s) { return grad_sq_impl(f, s); }

double integrate(const ScalarField& f) { return pairwise_sum(weighted_values(f)); }

cplx integrate(const ComplexField& f) {
  const double re = integrate(f.map([](cplx z) { return z.real(); }));
  const double im = integrate(f.map([](cplx z) { return z.imag(); }));
  return {re, im};
}

std::vector<double> transverse_integral(const ScalarField& f, Axis axis) {
  const Grid3& g = f.grid();
  const auto ai = static_cast<std::size_t>(axis);
  const Axis t1 = static_cast<Axis>((ai + 1) % 3);
  const Axis t2 = static_cast<Axis>((ai + 2) % 3);
  const auto w1 = g.trapezoid_weights(t1);
  const auto w2 = g.trapezoid_weights(t2);
  std::vector<double> out(g.n(axis));
  std::vector<double> slab(g.n(t1) * g.n(t2));
  for (std::size_t i = 0; i < g.n(axis); ++i) {
    std::size_t m = 0;
    for (std::size_t j = 0; j < g.n(t1); ++j)
      for (std::size_t l = 0; l < g.n(t2); ++l, ++m) {
        std::array<std::size_t, 3> id{};
        id[ai] = i;
        id[static_cast<std::size_t>(t1)] = j;
        id[static_cast<std::size_t>(t2)] = l;
        slab[m] = w1[j] * w2[l] * f.at(id[0], id[1], id[2]);
      }
    out[i] = pairwise_sum(slab);
  }
  return out;
}

double lp_norm(const ScalarField& f, double p) { return lp_norm_impl(f, p); }
double lp_norm(const ComplexField& f, double p) { return lp_norm_impl(f, p); }

double sobolev_norm(const ScalarField& f, double p, Stencil s) { return sobolev_impl(f, p, s); }
double sobolev_norm(const ComplexField& f, double p, Stencil s) { return sobolev_impl(f, p, s); }

WeightedIntegral weighted_l1(const ScalarField& grad_sq, const ScalarField& w,
                             double floor) {
  if (!(floor > 0.0)) throw InvalidArgument("weighted_gradient_l1: floor must be > 0");
  require_same_grid(grad_sq.grid(), w.grid(), "weighted_gradient_l1");
  WeightedIntegral r;
  const double significant = 1e-12 * max_abs(grad_sq);
  ScalarField integrand(w.grid());
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] >= floor) {
      integrand[k] = grad_sq[k] / w[k];
    } else {
      ++r.masked;
      if (grad_sq[k] > significant) ++r.masked_significant;
    }
  }
  r.value = integrate(integrand);
  return r;
}

WeightedIntegral weighted_gradient_l1(const ScalarField& f, const ScalarField& w,
                                      double floor, Stencil s) {
  if (!(floor > 0.0)) throw InvalidArgument("weighted_gradient_l1: floor must be > 0");
  return weighted_l1(gradient_norm_sq(f, s), w, floor);
}

WeightedIntegral weighted_gradient_l1(const ComplexField& f, const ScalarField& w,
                                      double floor, Stencil s) {
  if (!(floor > 0.0)) throw InvalidArgument("weighted_gradient_l1: floor must be > 0");
  return weighted_l1(gradient_norm_sq(f, s), w, floor);
}

double max_value(const ScalarField& f) {
  auto v = f.values();
  return *std::max_element(v.begin(), v.end());
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (cplx z : f.values()) m = std::max(m, std::abs(z));
  return m;
}

double boundary_max_abs(const ScalarField& f) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f.grid().on_boundary(k)) m = std::max(m, std::abs(f[k]));
  return m;
}

void require_same_grid(const Grid3& a, const Grid3& b, const char* what) {
  if (a != b) throw InvalidArgument(std::string(what) + ": fields live on different grids");
}

}  // namespace sdrep
