#pragma once

// Uniform tensor-product grids, real/complex grid functions, and the
// discrete calculus (gradients, trapezoidal quadrature, L^p norms) that
// every other module builds on.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sdrep {

using cplx = std::complex<double>;

enum class Axis { X = 0, Y = 1, Z = 2 };

struct GridIndex {
  std::size_t ix = 0, iy = 0, iz = 0;
  bool operator==(const GridIndex&) const = default;
};

/// Uniform node-centred grid on a rectangular box. Nodes sit on both box
/// faces, so the spacing along x is (x1 - x0) / (nx - 1).
class Grid3 {
 public:
  Grid3(std::array<std::size_t, 3> dims, std::array<double, 3> lo,
        std::array<double, 3> hi);

  /// n^3 nodes on [-half_width, half_width]^3.
  static Grid3 cube(std::size_t n, double half_width);
  static Grid3 cube(std::size_t n, double lo, double hi);

  std::size_t n(Axis a) const { return dims_[idx(a)]; }
  std::size_t nx() const { return dims_[0]; }
  std::size_t ny() const { return dims_[1]; }
  std::size_t nz() const { return dims_[2]; }
  const std::array<std::size_t, 3>& dims() const { return dims_; }
  const std::array<double, 3>& lo() const { return lo_; }
  const std::array<double, 3>& hi() const { return hi_; }
  double spacing(Axis a) const { return h_[idx(a)]; }
  const std::array<double, 3>& spacings() const { return h_; }
  std::size_t size() const { return dims_[0] * dims_[1] * dims_[2]; }

  double coord(Axis a, std::size_t i) const {
    return lo_[idx(a)] + static_cast<double>(i) * h_[idx(a)];
  }

  // C order over (ix, iy, iz); iz fastest.
  std::size_t flat(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return (ix * dims_[1] + iy) * dims_[2] + iz;
  }
  GridIndex unflat(std::size_t k) const;

  /// 1D trapezoid weights along one axis.
  std::vector<double> trapezoid_weights(Axis a) const;

  /// True when the node at `k` lies on a face of the box.
  bool on_boundary(std::size_t k) const;

  bool operator==(const Grid3& o) const {
    return dims_ == o.dims_ && lo_ == o.lo_ && hi_ == o.hi_;
  }
  bool operator!=(const Grid3& o) const { return !(*this == o); }

 private:
  static std::size_t idx(Axis a) { return static_cast<std::size_t>(a); }
  std::array<std::size_t, 3> dims_;
  std::array<double, 3> lo_, hi_, h_;
};

template <class T>
class Field {
 public:
  using value_type = T;

  explicit Field(Grid3 grid) : grid_(std::move(grid)), values_(grid_.size()) {}
  Field(Grid3 grid, std::vector<T> values);

  const Grid3& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  T& operator[](std::size_t k) { return values_[k]; }
  const T& operator[](std::size_t k) const { return values_[k]; }
  T& at(std::size_t ix, std::size_t iy, std::size_t iz) {
    return values_[grid_.flat(ix, iy, iz)];
  }
  const T& at(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return values_[grid_.flat(ix, iy, iz)];
  }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  /// Fill from f(x, y, z).
  template <class Fn>
  static Field sample(const Grid3& grid, Fn&& fn) {
    Field out(grid);
    std::size_t k = 0;
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const double x = grid.coord(Axis::X, ix);
      for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
        const double y = grid.coord(Axis::Y, iy);
        for (std::size_t iz = 0; iz < grid.nz(); ++iz)
          out.values_[k++] = fn(x, y, grid.coord(Axis::Z, iz));
      }
    }
    return out;
  }

  /// Pointwise map producing a field of the result type.
  template <class Fn>
  auto map(Fn&& fn) const {
    using R = std::decay_t<decltype(fn(values_[0]))>;
    Field<R> out(grid_);
    for (std::size_t k = 0; k < values_.size(); ++k) out[k] = fn(values_[k]);
    return out;
  }

  Field& operator*=(double c) {
    for (auto& v : values_) v *= c;
    return *this;
  }

  bool operator==(const Field& o) const {
    return grid_ == o.grid_ && values_ == o.values_;
  }

 private:
  Grid3 grid_;
  std::vector<T> values_;
};

using ScalarField = Field<double>;
using ComplexField = Field<cplx>;

template <class T>
using Gradient = std::array<Field<T>, 3>;

/// Interior stencil for first derivatives. Both variants fall back to
/// second-order one-sided differences on the two boundary faces and are
/// exact on affine fields.
enum class Stencil { Central2, Central4 };

inline constexpr Stencil kDefaultStencil = Stencil::Central4;

/// Deterministic pairwise (tree) summation; the canonical reduction order
/// for all quadratures.
double pairwise_sum(std::span<const double> v);

Gradient<double> gradient(const ScalarField& f, Stencil s = kDefaultStencil);
Gradient<cplx> gradient(const ComplexField& f, Stencil s = kDefaultStencil);

/// Derivative of a 1D uniformly sampled function, same stencil rules.
std::vector<double> derivative_1d(std::span<const double> f, double h,
                                  Stencil s = kDefaultStencil);
std::vector<cplx> derivative_1d(std::span<const cplx> f, double h,
                                Stencil s = kDefaultStencil);

/// |grad f|^2 pointwise.
ScalarField gradient_norm_sq(const ScalarField& f, Stencil s = kDefaultStencil);
ScalarField gradient_norm_sq(const ComplexField& f, Stencil s = kDefaultStencil);

/// Trapezoidal quadrature over the box.
double integrate(const ScalarField& f);
cplx integrate(const ComplexField& f);

/// Trapezoidal quadrature over the two axes transverse to `axis`, one value
/// per node along `axis`.
std::vector<double> transverse_integral(const ScalarField& f, Axis axis);

double lp_norm(const ScalarField& f, double p);
double lp_norm(const ComplexField& f, double p);

/// (||f||_p^p + || |grad f| ||_p^p)^(1/p).
double sobolev_norm(const ScalarField& f, double p, Stencil s = kDefaultStencil);
double sobolev_norm(const ComplexField& f, double p, Stencil s = kDefaultStencil);

struct WeightedIntegral {
  double value = 0.0;
  std::size_t masked = 0;  ///< points with w < floor (dropped)
  /// Masked points whose numerator |grad f|^2 is not negligible
  /// (above 1e-12 of its maximum); these are the points where the drop
  /// can matter.
  std::size_t masked_significant = 0;
};

/// Integral of |grad f|^2 / w over points with w >= floor.
WeightedIntegral weighted_gradient_l1(const ScalarField& f, const ScalarField& w,
                                      double floor, Stencil s = kDefaultStencil);
WeightedIntegral weighted_gradient_l1(const ComplexField& f, const ScalarField& w,
                                      double floor, Stencil s = kDefaultStencil);

/// Same, with a precomputed |grad f|^2.
WeightedIntegral weighted_l1(const ScalarField& grad_sq, const ScalarField& w,
                             double floor);

double max_value(const ScalarField& f);
double max_abs(const ScalarField& f);
double max_abs(const ComplexField& f);

/// Largest |f| over boundary nodes.
double boundary_max_abs(const ScalarField& f);

void require_same_grid(const Grid3& a, const Grid3& b, const char* what);

}  // namespace sdrep
