#pragma once

#include <ostream>

namespace modlat {

/// Parses argv, runs one verb and writes the rendered result.
/// Exit codes: 0 pass/success, 1 fail, 2 usage or input error, 3 inconclusive.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace modlat
