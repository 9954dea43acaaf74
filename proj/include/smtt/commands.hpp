#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

#include "smtt/config.hpp"
#include "smtt/tracker.hpp"

namespace smtt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 2;

struct TrackOptions {
  std::filesystem::path sequence_dir;
  std::filesystem::path output;
  std::optional<std::filesystem::path> config_file;
  KeyValues overrides;  // command-line flags as config keys; beat the file
  std::optional<std::filesystem::path> overlay_dir;
};

struct EvalOptions {
  std::filesystem::path result;
  std::filesystem::path truth;
  std::optional<std::filesystem::path> curves_csv;
  std::optional<std::filesystem::path> report;
};

// Defaults, then the config file, then overrides.
TrackerConfig resolve_config(const std::optional<std::filesystem::path>& config_file,
                             const KeyValues& overrides);

// Each returns a process exit code; diagnostics go to `log`.
int cmd_track(const TrackOptions& opts, std::ostream& log);
int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& log);
int cmd_synth(const std::filesystem::path& spec_path, const std::filesystem::path& out_dir,
              std::ostream& log);

}  // namespace smtt
