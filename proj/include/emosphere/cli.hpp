#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace emosphere::cli {

/// Runs the command line. Returns 0 on success, 1 on I/O or system failure,
/// 2 on validation or domain errors (also used for usage errors).
int run(int argc, char** argv);

/// In-process entry point; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace emosphere::cli
