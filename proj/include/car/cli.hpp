#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace car {

/// Entry point behind the car-entropy binary. Arguments exclude the program name.
/// Exit codes: 0 success, 1 usage error, 2 invalid spec or state, 3 mathematical
/// invariant violated.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace car
