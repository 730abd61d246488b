#ifndef TALK_CLI_HPP
#define TALK_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace talk {

// Dispatches one command-line invocation (without argv[0]). Exit codes:
// 0 success, 2 validation failure (message names the violated invariant),
// 3 capability error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace talk

#endif  // TALK_CLI_HPP
