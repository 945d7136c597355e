#pragma once

#include <iosfwd>

namespace pfs {

/// Entry point of the pfs tool. Returns the process exit code: 0 success,
/// 2 configuration error, 3 resource limit, 1 anything else.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pfs
