#pragma once

#include <string>
#include <vector>

#include "rcf/channel.hpp"

namespace rcf {

// JSON <-> SystemConfig. Keys carry units (pt_dbm, noise_dbm, pb_dbw, ...);
// dB values convert to linear watts at this boundary. Missing keys fall back
// to the built-in defaults; unknown keys are rejected.
std::string config_to_json(const SystemConfig& cfg);
SystemConfig config_from_json(const std::string& text);
SystemConfig load_config_file(const std::string& path);

// Applies "key=value" overrides (same keys as the JSON schema) on top of a
// config; values parse as JSON scalars.
SystemConfig apply_overrides(const SystemConfig& cfg,
                             const std::vector<std::string>& overrides);

// FNV-1a over the canonical (sorted-key) JSON form; stable under reordering
// of keys in the input file.
std::string config_hash(const SystemConfig& cfg);

}  // namespace rcf
