#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace morphtag::cli {

/// Full command-line front end (stem / rmwe / extract / train / tag / eval /
/// sweep). `args` excludes the program name. Returns the process exit code:
/// 0 success, 1 runtime or data error, 2 usage error.
int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace morphtag::cli
