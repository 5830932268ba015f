#pragma once

#include <iosfwd>

namespace dpda {

// Exit codes: 0 success, 1 solver divergence or failed run, 2 config error,
// 3 certificate check failed.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dpda
