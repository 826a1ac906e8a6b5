#pragma once

#include <string>
#include <vector>

namespace hcforge {

// CLI entry point shared by the hcforge binary and the tests. Returns 0 on
// success, 1 on domain errors (guards, malformed inputs), 2 on usage errors.
int run_cli(const std::vector<std::string>& args);

}  // namespace hcforge
