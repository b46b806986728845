#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "snrkit/report.hpp"

namespace snrkit {

enum class Command { Synth, Analyze, Bootstrap };

struct RunConfig {
  Command command = Command::Analyze;
  std::string input_path;
  std::string output_path;  // empty: standard output (analyze only)
  double threshold = 0.0;
  double epsilon = kDefaultClampEpsilon;
  std::size_t replicates = 100;
  std::uint64_t seed = 0;
  std::vector<double> quantile_probs{0.025, 0.5, 0.975};
  std::size_t bins = 20;
  unsigned threads = 0;
  // synth
  double phi = 0.3 * 3.14159265358979323846;
  double c = 1.0;
  std::size_t members = 25;
  std::size_t length = 100;

  /// Checks values and paths before any computation.
  /// Throws Error{InvalidArgument} or Error{IoError}.
  void validate() const;
};

std::string_view command_name(Command command) noexcept;
Json config_json(const RunConfig& config);

/// Writes the ensemble CSV and prints `analytic_rpc <value>` to `out`.
void cmd_synth(const RunConfig& config, std::ostream& out);

struct CommandResult {
  Json report;
  std::vector<DiagnosticFailure> failures;  // empty iff the report is complete
};

CommandResult cmd_analyze(const RunConfig& config);

/// Also writes `<stem>_<statistic>_hist.csv` and `<stem>_<statistic>_replicates.csv`
/// next to the output file for each statistic that succeeded.
CommandResult cmd_bootstrap(const RunConfig& config);

/// Runs the command, writing reports to the output file or `out` and a
/// single-line JSON error object to `err`. Returns the exit status:
/// 0 for a complete report, 1 otherwise.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace snrkit
