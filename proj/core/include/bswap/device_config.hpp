#pragma once

#include <optional>
#include <string>

#include "bswap/model.hpp"

namespace bswap {

/// Parsed device file. Frequencies are converted to rad/s on load.
///
///   # comment
///   q1.freq_GHz   = 4.3796
///   q1.anharm_GHz = -0.2393
///   q2.freq_GHz   = 4.61368
///   q2.anharm_GHz = -0.24278
///   lambda        = 1.0
///   target_zz_kHz = 90        # or J_GHz = ..., never both
///   levels        = 3
///   q1.t1_us      = 38        # optional
///   q2.t1_us      = 32        # optional
struct DeviceConfig {
  DeviceParams device;  // J already resolved (fitted when target_zz is given)
  std::optional<double> target_zz;
  std::optional<double> t1_q1;  // seconds
  std::optional<double> t1_q2;
  std::string source;
};

/// Throws ConfigError on syntax or validation failure, CalibrationError if the
/// ZZ target cannot be met.
DeviceConfig parse_device_config(const std::string& text, const std::string& source = "<string>",
                                 std::optional<int> levels_override = std::nullopt);
DeviceConfig load_device_config(const std::string& path, std::optional<int> levels_override = std::nullopt);

}  // namespace bswap
