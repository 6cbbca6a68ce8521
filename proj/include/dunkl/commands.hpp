#pragma once

#include <iosfwd>

namespace dunkl {

/// Entry point of the dunkl_lab tool. Returns the process exit status:
/// 0 success, 1 a verification failed, 2 usage, schema or runtime error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dunkl
