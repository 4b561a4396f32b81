#pragma once

#include <iosfwd>

namespace gkcs::cli {

/// Entry point behind the `gkcs` executable. Output goes to `out` unless --out
/// names a file; diagnostics and warnings go to `err`.
///
/// Exit codes: 0 success, 1 numerical or domain failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gkcs::cli
