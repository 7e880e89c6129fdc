#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace gdn::cli {

inline constexpr const char* kVersion = "1.0.0";

enum class ValueType { integer, real, text, boolean, int_list, real_list, text_list };

struct KeySpec {
  const char* key;
  ValueType type;
  const char* help;
};

/// Keys a command accepts, in flag order.
const std::vector<KeySpec>& command_keys(const std::string& command);
const std::vector<std::string>& command_names();

/// Per-dataset hyper-parameter profile restricted to the keys `command` accepts.
nlohmann::json profile_defaults(const std::string& profile, const std::string& command);
const std::vector<std::string>& profile_names();

/// Converts flag text to the key's JSON type. Throws UsageError.
nlohmann::json parse_value(const KeySpec& spec, const std::string& text);

/// Throws UsageError naming the key path on unknown keys or wrong types.
void validate_config(const nlohmann::json& config, const std::string& command,
                     const std::string& origin);

/// command defaults < profile < file < flags.
nlohmann::json resolve_config(const std::string& command, const nlohmann::json& file,
                              const nlohmann::json& flags);

/// FNV-1a 64 over the canonical dump, without keys that cannot change results
/// (threads and output paths). 16 hex digits.
std::string config_hash(const nlohmann::json& resolved);

/// Full command-line entry point. Returns the process exit status.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace gdn::cli
