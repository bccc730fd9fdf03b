#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dlsec::cli {

/// Stable exit codes of the command-line tool.
enum ExitCode : int
{
  kOk = 0,
  kUsage = 2,
  kInfeasible = 3,
  kValidationFailed = 4
};

/// Runs `dlsec <subcommand> ...`; args excludes the program name.
int run (const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// One line of the agreement suite.
struct CheckResult
{
  std::string name;
  double quadrature;
  double monte_carlo;
  double std_error;
  double tolerance;
  bool pass;
};

struct ValidateOptions
{
  bool quick = false;
  std::string dist = "chisq:4";
  unsigned long long seed = 1;
  double sigma = 4.0;
  double abs_tol = 1e-6;
};

/// MC-vs-quadrature agreement and fixed-point grid cross-check.
std::vector<CheckResult> run_validation (const ValidateOptions &opts);

} // namespace dlsec::cli
