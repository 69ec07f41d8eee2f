#pragma once

#include <string>

#include "rfds/config.hpp"

namespace rfds {

/// Apply `key = value` entries from config-file text onto a base config.
/// Unknown keys are errors. Throws Error::data with `source:line` context.
SensingConfig apply_config_text(const SensingConfig& base, const std::string& text,
                                const std::string& source_name);

SensingConfig load_config_file(const SensingConfig& base, const std::string& path);

/// Apply one CLI override of the form `key=value`.
SensingConfig apply_override(const SensingConfig& base, const std::string& spec);

/// Serialize every field. apply_config_text(base, serialize_config(cfg), ...)
/// reproduces cfg bit-exactly.
std::string serialize_config(const SensingConfig& cfg);

}  // namespace rfds
