#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rkdet {

/// Exit codes: 0 success or inequality holds, 1 violation or suite failure,
/// 2 usage or input error. Exactly one JSON document goes to `out`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace rkdet
