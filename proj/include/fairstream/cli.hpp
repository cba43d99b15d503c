#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace fairstream::cli {

inline constexpr const char* kReportSchema = "fairstream.report/1";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;  // solve | semi | known | oracle | gen | bench
  std::string input = "-";
  std::string metric = "euclidean";
  std::string group_col = "group";
  std::optional<int> k;
  std::vector<int> caps;
  std::optional<double> radius;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  std::string out;  // empty: standard output
  bool no_replay = false;
  bool semi = false;    // known: use the group-ordered solver
  bool serial = false;  // run the single-threaded reference paths

  // gen / bench
  int n = 0;
  double separation = 4.0;
  int dim = 2;
  std::vector<std::string> inputs;
  std::vector<int> sizes;
  int repeats = 1;
};

struct RunResult {
  nlohmann::json report;
  int exit_code = 0;
  std::string csv;  // gen output when no --out path is given
};

/// Executes one subcommand. Never throws for input, I/O or infeasibility
/// problems; those come back as a structured error report with a nonzero
/// exit code (1 for bad input or I/O, 2 when no fair solution was found).
RunResult run(const RunConfig& config);

/// Parses argv, runs, and writes the JSON report (or CSV for gen) to --out
/// or `out`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Report with every wall-time field removed, for determinism checks.
nlohmann::json strip_timing(nlohmann::json report);

}  // namespace fairstream::cli
