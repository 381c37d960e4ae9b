#include "sdrep/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "sdrep/check.hpp"
#include "sdrep/decompose.hpp"
#include "sdrep/density_gen.hpp"
#include "sdrep/error.hpp"
#include "sdrep/io.hpp"
#include "sdrep/matrix_sqrt.hpp"
#include "sdrep/report.hpp"
#include "sdrep/witness.hpp"

namespace sdrep {

namespace {

struct TolFlags {
  double norm = ToleranceConfig{}.norm_rel;
  double neg = ToleranceConfig{}.neg_rel;
  double floor = ToleranceConfig{}.floor_rel;

  void add(CLI::App* app) {
    app->add_option("--tol-norm", norm, "normalization tolerance, relative to N");
    app->add_option("--tol-neg", neg, "sign tolerance, relative to max(rho)");
    app->add_option("--floor", floor, "division floor, relative to max(rho)");
  }
  ToleranceConfig config() const {
    ToleranceConfig t;
    t.norm_rel = norm;
    t.neg_rel = neg;
    t.floor_rel = floor;
    t.validate();
    return t;
  }
};

struct FamilyFlags {
  std::string family;
  std::size_t grid = 64;
  std::vector<double> box;
  int electrons = 2;
  double width = 1.0;
  double coupling = 0.5;
  double phase_slope = 0.5;
  double mass = 1.5;

  void add(CLI::App* app, bool required) {
    auto* f = app->add_option("--family", family, "fixture family")
                  ->check(CLI::IsMember({"gaussian", "rank1", "mixture", "negative-lobe",
                                         "sigma-excess", "wrong-norm", "step"}));
    if (required) f->required();
    app->add_option("--grid", grid, "nodes per axis")->check(CLI::Range(4, 1024));
    app->add_option("--box", box, "cubic box lo hi")->expected(2);
    app->add_option("--electrons", electrons, "electron count N")->check(CLI::PositiveNumber);
    app->add_option("--width", width, "Gaussian width a")->check(CLI::PositiveNumber);
    app->add_option("--coupling", coupling, "mixture coupling c, |c| < 1");
    app->add_option("--phase-slope", phase_slope, "mixture phase slope alpha");
    app->add_option("--mass", mass, "wrong-norm: electrons actually carried");
  }

  double default_half_width() const {
    // six widths past the outermost centre keep the lost mass far below
    // 1e-8 while leaving the phase oscillations resolved at 64 nodes
    if (family == "rank1") return RankOneParams{}.separation + 6.0 * 1.2 * width;
    if (family == "mixture") return 0.5 * width + 6.0 * 1.25 * width;
    if (family == "negative-lobe") return 1.5 * width + 6.5 * width;
    return 8.0 * width;
  }

  Grid3 make_grid(std::size_t n) const {
    if (box.size() == 2) return Grid3::cube(n, box[0], box[1]);
    return Grid3::cube(n, default_half_width());
  }

  SpinDensityField make(std::size_t n) const {
    const Grid3 g = make_grid(n);
    if (family == "gaussian") return gaussian_diagonal(electrons, width, g);
    if (family == "rank1") {
      RankOneParams p;
      p.n_electrons = electrons;
      p.a_up = width;
      p.a_dn = 1.2 * width;
      return rank1_two_lobe(p, g);
    }
    if (family == "mixture") {
      MixtureParams p;
      p.n_electrons = electrons;
      p.a_up = width;
      p.a_dn = 1.25 * width;
      p.center_up = {0.5 * width, 0.0, 0.0};
      p.center_dn = {-0.5 * width, 0.0, 0.0};
      p.coupling = coupling;
      p.phase_slope = phase_slope;
      return full_rank_mixture(p, g);
    }
    if (family == "negative-lobe") return negative_lobe(electrons, width, g);
    if (family == "sigma-excess") return sigma_excess(electrons, width, g);
    if (family == "wrong-norm") return wrong_norm(electrons, mass, width, g);
    if (family == "step") return step_density(electrons, width, g);
    throw InvalidArgument("unknown family '" + family + "'");
  }
};

int exit_for(Verdict v) { return v == Verdict::Pass ? 0 : 1; }

// Write the report to `path` if given, otherwise to out.
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path.empty()) {
    fn(out);
    return;
  }
  std::ofstream f(path);
  if (!f) throw FormatError("cannot open " + path + " for writing");
  fn(f);
}

AxisChoice parse_axis(const std::string& s) {
  static const std::map<std::string, AxisChoice> m{
      {"x", AxisChoice::X}, {"y", AxisChoice::Y}, {"z", AxisChoice::Z}, {"auto", AxisChoice::Auto}};
  return m.at(s);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-density representability checker and witness builder", "sdrep"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "write a fixture density");
  FamilyFlags gen_f;
  std::string gen_out;
  gen_f.add(gen, true);
  gen->add_option("--out", gen_out, "output SPDF file")->required();

  // check
  auto* chk = app.add_subcommand("check", "decide the representability conditions");
  std::string chk_file, chk_refined, chk_report;
  TolFlags chk_t;
  chk->add_option("file", chk_file, "SPDF density")->required();
  chk->add_option("--refined", chk_refined, "same density on a finer grid");
  chk->add_option("--report", chk_report, "write the report here instead of stdout");
  chk_t.add(chk);

  // sqrt
  auto* sq = app.add_subcommand("sqrt", "pointwise square root of R");
  std::string sq_file, sq_out;
  TolFlags sq_t;
  sq->add_option("file", sq_file, "SPDF density")->required();
  sq->add_option("--out", sq_out, "output SPDF container (r_up, r_dn, Re s, Im s)")->required();
  sq_t.add(sq);

  // eigs
  auto* eg = app.add_subcommand("eigs", "eigenvalue densities and their H1 check");
  std::string eg_file, eg_out, eg_refined, eg_report;
  TolFlags eg_t;
  eg->add_option("file", eg_file, "SPDF density")->required();
  eg->add_option("--out", eg_out, "write diag(rho_plus, rho_minus) as SPDF");
  eg->add_option("--refined", eg_refined, "same density on a finer grid");
  eg->add_option("--report", eg_report, "write the report here instead of stdout");
  eg_t.add(eg);

  // construct
  auto* con = app.add_subcommand("construct", "build a mixed-state witness");
  std::string con_file, con_out, con_axis = "x";
  bool con_orth = false;
  TolFlags con_t;
  con->add_option("file", con_file, "SPDF density")->required();
  con->add_option("--out", con_out, "witness directory")->required();
  con->add_option("--axis", con_axis, "phase axis")->check(CLI::IsMember({"x", "y", "z", "auto"}));
  con->add_flag("--orthogonalize", con_orth, "make each branch Gram matrix exact");
  con_t.add(con);

  // verify
  auto* ver = app.add_subcommand("verify", "check a witness against a density");
  std::string ver_dir, ver_file, ver_report;
  double ver_slack = VerifyOptions{}.slack;
  bool ver_coleman = false;
  TolFlags ver_t;
  ver->add_option("witness", ver_dir, "witness directory")->required();
  ver->add_option("file", ver_file, "target SPDF density")->required();
  ver->add_option("--report", ver_report, "write the report here instead of stdout");
  ver->add_option("--slack", ver_slack, "relative slack on the integrated inequalities");
  ver->add_flag("--coleman", ver_coleman, "also report occupation numbers (small grids)");
  ver_t.add(ver);

  // norms
  auto* nrm = app.add_subcommand("norms", "refinement study of the discrete norms");
  std::vector<std::string> nrm_files;
  FamilyFlags nrm_f;
  std::size_t nrm_refine = 0;
  double nrm_max = ToleranceConfig{}.refine_threshold;
  TolFlags nrm_t;
  nrm->add_option("files", nrm_files, "COARSE FINE SPDF densities")->expected(0, 2);
  nrm_f.add(nrm, false);
  nrm->add_option("--refine", nrm_refine, "fine grid nodes per axis (with --family)");
  nrm->add_option("--max-change", nrm_max, "largest accepted relative change");
  nrm_t.add(nrm);

  std::vector<std::string> argv_store{"sdrep"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  if (gen->parsed()) {
    write_spdf(gen_f.make(gen_f.grid), gen_out);
    out << "wrote " << gen_out << '\n';
    return 0;
  }

  if (chk->parsed()) {
    const ToleranceConfig tol = chk_t.config();
    const SpinDensityField r = read_spdf(chk_file);
    const CheckReport rep = chk_refined.empty() ? check(r, tol) : check(r, read_spdf(chk_refined), tol);
    emit(chk_report, out, [&](std::ostream& o) { write_check_report(o, rep); });
    if (!chk_report.empty()) out << "overall: " << to_string(rep.overall) << '\n';
    return exit_for(rep.overall);
  }

  if (sq->parsed()) {
    const SpinDensityField r = read_spdf(sq_file);
    write_spdf(sqrt_as_spdf(sqrt_field(r, sq_t.config()), r.n_electrons), sq_out);
    out << "wrote " << sq_out << '\n';
    return 0;
  }

  if (eg->parsed()) {
    const ToleranceConfig tol = eg_t.config();
    const SpinDensityField r = read_spdf(eg_file);
    const ConditionResult c =
        eg_refined.empty() ? corollary_check(r, tol) : corollary_check(r, read_spdf(eg_refined), tol);
    if (!eg_out.empty()) {
      const EigenDensities e = eigen_densities(r, tol);
      write_spdf(SpinDensityField(e.rho_plus, e.rho_minus, ComplexField(r.grid()), r.n_electrons),
                 eg_out);
    }
    emit(eg_report, out, [&](std::ostream& o) { write_condition(o, c); });
    return exit_for(c.verdict);
  }

  if (con->parsed()) {
    ConstructOptions opt;
    opt.harriman.tol = con_t.config();
    opt.harriman.axis = parse_axis(con_axis);
    opt.harriman.orthogonalize = con_orth;
    const SpinDensityField r = read_spdf(con_file);
    const Witness w = construct_witness(r, opt);
    write_witness(w, con_out);
    out << "branches: " << w.branches.size() << '\n';
    for (std::size_t b = 0; b < w.branches.size(); ++b) {
      const Branch& br = w.branches[b];
      const bool bounds = std::all_of(br.bounds.begin(), br.bounds.end(),
                                      [](const KineticBound& k) { return k.holds; });
      out << "branch_" << b << ": weight " << format_value(br.weight) << ", "
          << (br.label.empty() ? "-" : br.label) << (br.spin_swapped ? ", swapped" : "")
          << ", kinetic bound " << (bounds ? "holds" : "violated") << '\n';
    }
    return 0;
  }

  if (ver->parsed()) {
    VerifyOptions opt;
    opt.tol = ver_t.config();
    opt.slack = ver_slack;
    const Witness w = read_witness(ver_dir);
    const SpinDensityField r = read_spdf(ver_file);
    const VerifyReport rep = verify(w, r, opt);
    emit(ver_report, out, [&](std::ostream& o) {
      write_verify_report(o, rep, w);
      if (ver_coleman) {
        o << "\ncheck: occupations\n";
        const auto occ = coleman_occupations(w);
        for (std::size_t i = 0; i < occ.size(); ++i)
          o << "n_" << i << ": " << format_value(occ[i]) << '\n';
      }
    });
    if (!ver_report.empty()) out << "overall: " << (rep.passed() ? "pass" : "fail") << '\n';
    return rep.passed() ? 0 : 1;
  }

  if (nrm->parsed()) {
    const ToleranceConfig tol = nrm_t.config();
    std::optional<SpinDensityField> coarse, fine;
    if (nrm_files.size() == 2) {
      coarse = read_spdf(nrm_files[0]);
      fine = read_spdf(nrm_files[1]);
    } else if (!nrm_f.family.empty() && nrm_files.empty()) {
      if (nrm_refine <= nrm_f.grid) throw InvalidArgument("--refine must exceed --grid");
      coarse = nrm_f.make(nrm_f.grid);
      fine = nrm_f.make(nrm_refine);
    } else {
      err << "norms: give COARSE FINE files or --family with --grid and --refine\n";
      return 2;
    }
    const RegularityNorms a = regularity_norms(*coarse, tol), b = regularity_norms(*fine, tol);
    const std::vector<std::tuple<const char*, double, double>> rows{
        {"trace", a.trace, b.trace},
        {"h1_sqrt_rho_up", a.h1_up, b.h1_up},
        {"h1_sqrt_rho_dn", a.h1_dn, b.h1_dn},
        {"w132_sigma", a.w132_sigma, b.w132_sigma},
        {"w132_sqrt_det", a.w132_sqrt_det, b.w132_sqrt_det},
        {"grad_sigma_sq_over_rho", a.sigma_weighted.value, b.sigma_weighted.value},
        {"grad_sqrt_det_sq_over_rho", a.sqrt_det_weighted.value, b.sqrt_det_weighted.value}};
    bool stable = true;
    out << "coarse_points: " << coarse->grid().size() << '\n'
        << "fine_points: " << fine->grid().size() << '\n';
    for (const auto& [name, c, f] : rows) {
      const double rel = relative_change(c, f);
      stable = stable && rel < nrm_max;
      out << '\n'
          << "norm: " << name << '\n'
          << "coarse: " << format_value(c) << '\n'
          << "fine: " << format_value(f) << '\n'
          << "rel_change: " << format_value(rel) << '\n';
    }
    out << "\nstable: " << (stable ? "yes" : "no") << '\n';
    return stable ? 0 : 1;
  }
  return 2;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run(args, out, err);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace sdrep
