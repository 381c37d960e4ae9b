#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdrep {

/// Exit codes: 0 success or pass, 1 checked and failed (including
/// indeterminate), 2 usage or I/O error.
int cli_main(int argc, char** argv);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdrep
