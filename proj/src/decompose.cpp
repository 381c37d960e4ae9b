#include "sdrep/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "sdrep/error.hpp"
#include "sdrep/matrix_sqrt.hpp"

namespace sdrep {

double CutoffFunction::operator()(double x) const {
  const double u = std::clamp((x - 0.5) / 1.5, 0.0, 1.0);
  return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

bool is_null_determinant(const SpinDensityField& r) {
  const double m = r.max_total();
  const ScalarField det = det_field(r);
  const double lim = kNullDetRel * m * m;
  return std::all_of(det.values().begin(), det.values().end(),
                     [lim](double d) { return std::abs(d) <= lim; });
}

bool ratio_bounded(const ScalarField& num, const ScalarField& den, double factor,
                   const ToleranceConfig& tol, double max_rho) {
  const double slack = tol.neg_rel * max_rho;
  for (std::size_t k = 0; k < num.size(); ++k)
    if (num[k] > factor * den[k] + slack) return false;
  return true;
}

namespace {

// Split r into a / t and (r - a) / (1 - t), t = integral tr(a) / N.
SplitResult split_by(const SpinDensityField& a, const SpinDensityField& b, int n) {
  SplitResult out;
  const double t = (integrate(a.rho_up) + integrate(a.rho_dn)) / n;
  if (t < kDegenerateWeight) {
    out.t = 0.0;
    out.piece2 = b.scaled(1.0 / (1.0 - t));
  } else if (t > 1.0 - kDegenerateWeight) {
    out.t = 1.0;
    out.piece1 = a.scaled(1.0 / t);
  } else {
    out.t = t;
    out.piece1 = a.scaled(1.0 / t);
    out.piece2 = b.scaled(1.0 / (1.0 - t));
  }
  return out;
}

}  // namespace

SplitResult rank1_split(const SpinDensityField& r, const ToleranceConfig& tol) {
  const SqrtField root = sqrt_field(r, tol);
  const Grid3& g = r.grid();
  SpinDensityField a(g, r.n_electrons), b(g, r.n_electrons);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double ru = root.r_up[k], rd = root.r_dn[k];
    const cplx s = root.s[k];
    a.rho_up[k] = ru * ru;
    a.rho_dn[k] = std::norm(s);
    a.sigma[k] = s * ru;
    b.rho_up[k] = std::norm(s);
    b.rho_dn[k] = rd * rd;
    b.sigma[k] = s * rd;
  }
  return split_by(a, b, r.n_electrons);
}

SplitResult ratio_split(const SpinDensityField& r, const CutoffFunction& chi,
                        const ToleranceConfig& tol) {
  tol.validate();
  if (!is_null_determinant(r))
    throw PreconditionError("ratio_split: input determinant is not null");
  const Grid3& g = r.grid();
  SpinDensityField a(g, r.n_electrons), b(g, r.n_electrons);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double up = r.rho_up[k], dn = r.rho_dn[k];
    double ratio = 1.0;
    if (dn > 0.0)
      ratio = up / dn;
    else if (up > 0.0)
      ratio = std::numeric_limits<double>::infinity();
    const double c = chi(ratio);
    const double c2 = c * c;
    a.rho_up[k] = c2 * up;
    a.rho_dn[k] = c2 * dn;
    a.sigma[k] = c2 * r.sigma[k];
    b.rho_up[k] = (1.0 - c2) * up;
    b.rho_dn[k] = (1.0 - c2) * dn;
    b.sigma[k] = (1.0 - c2) * r.sigma[k];
  }
  return split_by(a, b, r.n_electrons);
}

namespace {

struct Stage {
  double weight;
  SpinDensityField piece;
  std::string label;
};

void require_piece(const SpinDensityField& piece, const std::string& label,
                   const ConstructOptions& opt) {
  if (!is_null_determinant(piece))
    throw PreconditionError("construct_witness: stage " + label +
                            " produced a piece with non-null determinant");
  if (!opt.check_pieces) return;
  const CheckReport rep = check(piece, opt.harriman.tol);
  for (const auto& c : rep.conditions)
    if (c.verdict == Verdict::Fail)
      throw PreconditionError("construct_witness: stage " + label + " piece fails condition " +
                              c.id + " (" + c.name + ")");
}

Branch harriman_branch(double weight, const SpinDensityField& piece, bool swap,
                       const std::string& label, const ConstructOptions& opt) {
  const SpinDensityField frame = swap ? spin_swap(piece) : piece;
  Branch b;
  b.weight = weight;
  b.spin_swapped = swap;
  b.label = label;
  try {
    b.orbitals = build_orbitals(frame, opt.harriman);
  } catch (const PreconditionError& e) {
    throw PreconditionError("construct_witness: stage " + label + ": " + e.what());
  }
  b.bounds = kinetic_bounds(frame, b.orbitals, opt.harriman.tol);
  if (swap)
    for (Spinor& o : b.orbitals.orbitals) std::swap(o.up, o.dn);
  return b;
}

}  // namespace

Witness construct_witness(const SpinDensityField& r, const ConstructOptions& opt) {
  const ToleranceConfig& tol = opt.harriman.tol;
  const CheckReport rep = check(r, tol);
  for (const auto& c : rep.conditions)
    if (c.verdict == Verdict::Fail)
      throw PreconditionError("construct_witness: input fails condition " + c.id + " (" +
                              c.name + ")");

  std::vector<Stage> stages;
  if (is_null_determinant(r)) {
    stages.push_back({1.0, r, "input"});
  } else {
    SplitResult s = rank1_split(r, tol);
    if (s.piece1) stages.push_back({s.t, std::move(*s.piece1), "rank1-up"});
    if (s.piece2) stages.push_back({1.0 - s.t, std::move(*s.piece2), "rank1-dn"});
  }

  Witness w{r.grid(), r.n_electrons, {}};
  for (const Stage& st : stages) {
    require_piece(st.piece, st.label, opt);
    const double m = st.piece.max_total();
    if (ratio_bounded(st.piece.rho_up, st.piece.rho_dn, 2.0, tol, m)) {
      w.branches.push_back(harriman_branch(st.weight, st.piece, false, st.label, opt));
    } else if (ratio_bounded(st.piece.rho_dn, st.piece.rho_up, 2.0, tol, m)) {
      w.branches.push_back(harriman_branch(st.weight, st.piece, true, st.label, opt));
    } else {
      SplitResult s = ratio_split(st.piece, opt.chi, tol);
      if (s.piece1) {
        const std::string label = st.label + "/ratio-hi";
        require_piece(*s.piece1, label, opt);
        w.branches.push_back(harriman_branch(st.weight * s.t, *s.piece1, true, label, opt));
      }
      if (s.piece2) {
        const std::string label = st.label + "/ratio-lo";
        require_piece(*s.piece2, label, opt);
        w.branches.push_back(
            harriman_branch(st.weight * (1.0 - s.t), *s.piece2, false, label, opt));
      }
    }
  }
  return w;
}

}  // namespace sdrep
