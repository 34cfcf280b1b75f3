#ifndef ORLICZ_CLI_HPP
#define ORLICZ_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace orlicz::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

// args[0] is the program name. Reports go to `out` (or --output), messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace orlicz::cli

#endif
