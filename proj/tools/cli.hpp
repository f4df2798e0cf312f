#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mglcop::cli {

enum Exit { ok = 0, validation = 2, numerical = 3 };

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mglcop::cli
