#pragma once

#include <string>
#include <vector>

#include "coexsim/raman.hpp"

// Channel-plan ingestion: bundled presets A..G plus a flat key/value plan
// file format.

namespace coexsim {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// True for the bundled preset names "A".."G".
bool is_preset_name(const std::string& name);

// Bundled channel combinations, quantum channel 39, uniform per-channel power.
ChannelPlan preset_plan(const std::string& name, Direction direction, Power per_channel);

// Parses a plan file:
//   quantum_channel = 39
//   direction = co
//   channel 38 -10.5      # index, power in dBm
// '#' starts a comment; errors identify the offending line.
ChannelPlan parse_plan_file(const std::string& path, Direction default_direction,
                            Power default_power);

// Preset name or file path.
ChannelPlan load_plan(const std::string& name_or_path, Direction direction, Power per_channel);

// Short human-readable description for CSV echo headers.
std::string describe_plan(const ChannelPlan& plan);

}  // namespace coexsim
