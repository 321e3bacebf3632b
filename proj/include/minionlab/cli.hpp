#pragma once

#include <iosfwd>
#include <vector>
#include <string>

namespace minionlab {

/// Exit codes: 0 definite positive, 1 definite negative, 2 unknown or
/// inconclusive, 3 usage error, 4 data error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

} // namespace minionlab
