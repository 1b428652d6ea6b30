#pragma once

#include <iosfwd>

namespace tr2l::cli {

/// Entry point of the `tr2l` command-line tool. Returns the process exit code:
/// 0 success, 1 numerical or I/O failure, 2 usage or configuration error.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace tr2l::cli
