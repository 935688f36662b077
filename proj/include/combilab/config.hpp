#pragma once

#include "combilab/experiments.hpp"

#include <string>

namespace combilab {

/// Parses a JSON config document. Missing fields take ExperimentConfig defaults
/// (an absent grid selects default_grid()). Throws ConfigError with
/// "line L, column C" on malformed JSON, on unknown keys, and on any field
/// violating its constraint (the message names the field).
ExperimentConfig parse_config(const std::string& text);

/// Canonical JSON text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

/// 16 hex digits of FNV-1a over serialize_config(cfg) with out_dir cleared.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace combilab
