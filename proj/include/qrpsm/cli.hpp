/// @file cli.hpp
/// @brief Command-line entry point, callable in-process for testing.
///
/// Exit codes: 0 success / verified true, 1 verified false, 2 usage or
/// malformed input, 3 enumeration budget or search cap exceeded.

#pragma once

#include <ostream>

namespace qrpsm {

/// argv follows main() conventions (argv[0] is the program name).
/// All output, including error messages, goes to out.
int cli_main(int argc, const char* const* argv, std::ostream& out);

}  // namespace qrpsm
