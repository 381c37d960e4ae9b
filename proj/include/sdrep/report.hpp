#pragma once

// key: value text reports, one block per condition, blank line between blocks.

#include <iosfwd>
#include <string>

#include "sdrep/check.hpp"
#include "sdrep/witness.hpp"

namespace sdrep {

/// Shortest round-trip decimal form of v.
std::string format_value(double v);

void write_condition(std::ostream& out, const ConditionResult& c);
void write_check_report(std::ostream& out, const CheckReport& rep);
void write_verify_report(std::ostream& out, const VerifyReport& rep, const Witness& w);

}  // namespace sdrep
