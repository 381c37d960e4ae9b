#include "sdrep/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace sdrep {

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

const char* yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

void write_condition(std::ostream& out, const ConditionResult& c) {
  out << "condition: " << c.id << '\n'
      << "name: " << c.name << '\n'
      << "verdict: " << to_string(c.verdict) << '\n';
  for (const auto& [k, v] : c.values) out << k << ": " << format_value(v) << '\n';
  for (const auto& [k, v] : c.refined_values) out << "refined_" << k << ": " << format_value(v) << '\n';
  if (c.refinement_checked) out << "max_rel_change: " << format_value(c.max_rel_change) << '\n';
  if (c.masked > 0 || c.masked_significant > 0)
    out << "masked_points: " << c.masked << '\n'
        << "masked_significant: " << c.masked_significant << '\n';
  if (c.worst) out << "worst_index: " << c.worst->ix << ' ' << c.worst->iy << ' ' << c.worst->iz << '\n';
  if (!c.note.empty()) out << "note: " << c.note << '\n';
}

void write_check_report(std::ostream& out, const CheckReport& rep) {
  out << "overall: " << to_string(rep.overall) << '\n'
      << "grid_points: " << rep.grid_points << '\n'
      << "boundary_ratio: " << format_value(rep.boundary_ratio) << '\n'
      << "boundary_warning: " << yes_no(rep.boundary_warning) << '\n';
  for (const auto& c : rep.conditions) {
    out << '\n';
    write_condition(out, c);
  }
}

void write_verify_report(std::ostream& out, const VerifyReport& rep, const Witness& w) {
  out << "overall: " << (rep.passed() ? "pass" : "fail") << '\n'
      << "branches: " << w.branches.size() << '\n'
      << "electrons: " << w.n_electrons << '\n';

  out << "\ncheck: density_mismatch\n"
      << "value: " << format_value(rep.density_mismatch) << '\n'
      << "pass: " << yes_no(rep.mismatch_ok) << '\n';

  out << "\ncheck: gram\n";
  for (std::size_t b = 0; b < rep.gram_deviation.size(); ++b)
    out << "branch_" << b << ": " << format_value(rep.gram_deviation[b]) << '\n';
  out << "pass: " << yes_no(rep.gram_ok) << '\n';

  out << "\ncheck: weights\n";
  for (std::size_t b = 0; b < w.branches.size(); ++b)
    out << "branch_" << b << ": " << format_value(w.branches[b].weight) << '\n';
  out << "sum_deviation: " << format_value(rep.weight_sum_deviation) << '\n'
      << "pass: " << yes_no(rep.weight_ok) << '\n';

  out << "\ncheck: kinetic\n"
      << "kinetic_up: " << format_value(rep.kinetic.up) << '\n'
      << "kinetic_dn: " << format_value(rep.kinetic.dn) << '\n'
      << "kinetic_total: " << format_value(rep.kinetic.total()) << '\n'
      << "pass: " << yes_no(rep.kinetic_ok) << '\n';

  for (const auto& q : rep.inequalities) {
    out << "\ncheck: inequality\n"
        << "name: " << q.name << '\n'
        << "lhs: " << format_value(q.lhs) << '\n'
        << "rhs: " << format_value(q.rhs) << '\n'
        << "pass: " << yes_no(q.holds) << '\n';
  }
}

}  // namespace sdrep
