#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bnlab {

/// Runs one bnlab subcommand. Returns 0 on success, 1 on usage or config
/// errors, 2 on numerical failure. Data goes to the files named by flags;
/// `out` gets a short summary, `err` the diagnostics.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace bnlab
