#pragma once

#include <string>

#include "autows/calibration.hpp"
#include "autows/device.hpp"
#include "autows/layer.hpp"

namespace autows {

/// JSON front end. Parsers are strict: missing or ill-typed required fields,
/// unknown op names, and graph invariant violations all throw
/// std::runtime_error with the offending context in the message.
NetworkGraph parse_network_json(const std::string& text);
std::string serialize_network_json(const NetworkGraph& net);

DeviceSpec parse_device_json(const std::string& text);
std::string serialize_device_json(const DeviceSpec& dev);

CalibrationTable parse_calibration_json(const std::string& text);
std::string serialize_calibration_json(const CalibrationTable& calib);

/// Loads a device from a preset name or a JSON file path.
DeviceSpec load_device(const std::string& name_or_path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace autows
