#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cloneprob::cli {

/// Process exit codes: a total function of the analysis verdict.
enum ExitCode : int {
  kPositive = 0,  // feasible / positive gap / all killed
  kNegative = 1,  // infeasible / no certified gap
  kInputError = 2,
};

enum class Format { Json, Csv, Text };

struct RunConfig {
  double tolPsd = 1e-9;
  double tolNull = 1e-9;
  double tolBisection = 1e-12;
  Format format = Format::Json;
  std::uint64_t seed = 0;
  std::string outFile;  // empty: write to the given stream
};

/// Runs the command line `args` (args[0] is the program name). All output
/// goes to `out` (or --out FILE), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace cloneprob::cli
