#pragma once

#include <iosfwd>

namespace tsms {

/// Entry point of the `tsms` tool. Returns 0 on success, 2 on usage or
/// validation errors and 1 on runtime errors; errors are printed to `err` as a
/// single line starting with "error: <kind>: ".
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tsms
