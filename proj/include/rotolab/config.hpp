#pragma once

#include <map>
#include <string>

#include "rotolab/errors.hpp"
#include "rotolab/pipeline.hpp"

namespace rotolab {

// Flat view of a config file: keys are "section.key" (or bare "key" before
// the first section header). Values keep their literal text.
using ConfigMap = std::map<std::string, std::string>;

// Parses the key = value format:
//   - '#' starts a comment (outside quoted strings)
//   - [section] headers prefix following keys with "section."
//   - values: numbers, true/false, or "quoted strings"
// Duplicate keys and malformed lines raise ConfigError.
ConfigMap parse_config(const std::string& text);
ConfigMap load_config(const std::string& path);

// Applies recognized keys onto pipeline parameters; unknown keys raise
// ConfigError listing the offender.
void apply_config(const ConfigMap& cfg, pipeline::Params& p);

} // namespace rotolab
