#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "smtt/tracker.hpp"

namespace smtt {

// Ordered key -> value pairs from "key=value" lines. Blank lines and lines
// starting with '#' are skipped; a duplicate key or a line without '=' is an
// InputError naming the line number.
using KeyValues = std::map<std::string, std::string, std::less<>>;

KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values(const std::filesystem::path& path);

double to_double(const KeyValues& kv, std::string_view key);
long long to_integer(const KeyValues& kv, std::string_view key);

// Shortest round-trip decimal representation.
std::string format_number(double v);

// "HxW", e.g. "16x16".
std::pair<int, int> parse_patch(std::string_view text);

SolverMethod parse_method(std::string_view text);
std::string_view method_name(SolverMethod method);

// Overrides the fields named in `kv`; unknown keys are an InputError.
void apply_tracker_keys(TrackerConfig& cfg, const KeyValues& kv);

// Every tracker setting as key=value lines, accepted back by apply_tracker_keys.
std::string to_text(const TrackerConfig& cfg);

}  // namespace smtt
