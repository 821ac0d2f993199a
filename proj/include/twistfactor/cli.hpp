#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace twistfactor {

// Exit status: 0 success, 2 clean attack failure, 1 usage or invariant error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAttackFailed = 2;

// `args` excludes the program name. Reports go to `out` (or --out), logs and
// usage errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twistfactor
