#pragma once

#include <iosfwd>

namespace levimax::cli {

/// Runs the command line. Exit codes: 0 all criteria pass, 1 a criterion failed
/// or a numerical procedure broke down, 2 usage or configuration error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace levimax::cli
