#pragma once

#include <iosfwd>

namespace volterra {

// Command-line front end. Results go to `out`, diagnostics to `err`.
// Returns 0 on success, 1 when a library contract or check fails, 2 on bad
// usage (unknown flags, unreadable or malformed files).
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace volterra
