#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bnm::cli
{

/// Exit codes: 0 success, 1 bad input file or data, 2 bad arguments.
enum ExitCode : int
{
  exit_ok = 0,
  exit_bad_data = 1,
  exit_bad_arguments = 2
};

/// Runs one command line. `args` excludes the program name.
int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err );

} // namespace bnm::cli
