#pragma once

// Command implementations behind the dmmf executable. Each returns the
// process exit code: 0 ok, 1 unexpected failure, 2 configuration error,
// 3 pathwise invariant violation.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace dmmf {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_config = 2, exit_invariant = 3 };

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> reps;
  unsigned jobs = 1;
  std::string out_dir = ".";
};

/// Runs the replications of an experiment file; writes the summary and the
/// optional trace and curve files under out_dir.
int cmd_simulate(const std::string& config_path, const RunOptions& opt, std::ostream& out, std::ostream& err);

/// Tabulates v*(beta) over `grid` for a law given as text or as a file
/// holding that text.
int cmd_ideal(const std::string& law_spec, const std::string& grid, const std::string& out_name,
              const RunOptions& opt, std::ostream& out, std::ostream& err);

/// Writes the bound table described by a [bounds] parameter file.
int cmd_bounds(const std::string& params_path, const std::string& out_name, const RunOptions& opt, std::ostream& out,
               std::ostream& err);

/// Prints the canonical form of an experiment file.
int cmd_dump_config(const std::string& config_path, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

} // namespace dmmf
