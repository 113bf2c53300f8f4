#pragma once

#include <iosfwd>

namespace mwsn::cli {

/// Entry point of mwsn-sim. Returns the process exit status: 0 on success,
/// 1 on runtime failures (I/O), 2 on usage or configuration errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mwsn::cli
