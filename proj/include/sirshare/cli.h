#ifndef SIRSHARE_CLI_H_
#define SIRSHARE_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace sirshare {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;  // the check ran and said no

// Runs one `sirshare` invocation. `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace sirshare

#endif  // SIRSHARE_CLI_H_
