#pragma once

#include <iosfwd>

namespace mrx::cli {

/// Entry point of the command-line tool. Usage errors return 2, contract
/// or configuration violations 1.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace mrx::cli
