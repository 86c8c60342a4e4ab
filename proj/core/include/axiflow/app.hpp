#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "axiflow/config.hpp"

namespace axiflow {

enum class Command { kSolve, kSweep, kCritical, kDiagnose };

std::string_view to_string(Command command);
Command command_from_string(std::string_view name);

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct RunOptions {
  int jobs = 1;
  /// Overrides output.directory.
  std::optional<std::string> out_dir;
};

/// Runs one subcommand and writes its files. Returns kExitPass iff every
/// diagnostic requested by the command passes; kExitFail on failed
/// diagnostics or non-convergence (outputs still written and flagged);
/// kExitUsage when the command does not match the config; kExitIo on
/// filesystem errors. Progress lines go to `log`.
int run(Command command, const RunConfig& config, const RunOptions& options, std::ostream& log);

}  // namespace axiflow
