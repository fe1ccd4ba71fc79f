#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rnlab/arith.hpp"
#include "rnlab/report.hpp"

namespace rnlab {

enum ExitCode : int { kExitPass = 0, kExitAssertion = 1, kExitUsage = 2, kExitResource = 3 };

/// Every knob a subcommand reads, with defaults resolved before any computation.
struct RunConfig {
  std::string command;
  std::vector<i64> qs;
  double alpha = 0.2;
  int k_min = -2;
  int k_max = 2;
  std::string kind = "first";  ///< moments: first|second|mollified-first|mollified-second
  i64 m1 = 1;
  i64 m2 = 1;
  double center = 0.5;
  double eta = 0;
  double arc_scale = 1;  ///< C in mu = C q^{-eta}
  int centers = 1;
  double epsilon = 0.01;
  double beta = 0.1;
  double bump_start = 0;
  double bump_length = 0.5;
  int fourier_terms = 1024;
  int kl_order = 2;
  i64 kl_shift = 1;  ///< c in the W diagnostic
  int kl_window = 0;  ///< H; 0 means floor(sqrt q)
  int bins = 20;
  double afe_X = 1;
  double afe_target = 1e-12;
  std::string out_dir;
  std::string format = "csv";
  std::string cache_dir;
  unsigned workers = 1;

  std::string to_json() const;
};

/// Throws PreconditionError naming the first violated precondition.
void validate(const RunConfig& config);

/// Parses and runs one command. Tables go to `out` unless an output directory is set;
/// diagnostics and failure lists go to `err`. Returns an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs an already-parsed config (the same dispatch run_cli uses).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// The property suite behind `verify`, one row per check.
Table verify_table(i64 q, const RunConfig& config, std::vector<std::string>* failures);

}  // namespace rnlab
