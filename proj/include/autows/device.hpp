#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "autows/resources.hpp"

namespace autows {

constexpr std::int64_t kBram36Bits = 36864;  // one 36 Kb block

/// Target platform description. Bandwidth and clocks are held as integer
/// bits/s and Hz so constraint checks stay exact.
struct DeviceSpec {
  std::string name;
  std::int64_t bandwidth_bps = 0;  // off-chip link, bits per second
  std::int64_t clk_comp_hz = 0;    // compute clock
  std::int64_t clk_dma_hz = 0;     // DMA clock domain
  ResourceVector area;             // capacity; area.mem_bits == mem_budget_bits()

  /// On-chip memory budget implied by the block-RAM capacity.
  std::int64_t mem_budget_bits() const { return area.bram36 * kBram36Bits; }

  void validate() const;  // throws on non-positive fields

  bool operator==(const DeviceSpec& o) const = default;
};

/// Built-in device presets: zedboard, zc706, zcu102, u50, u250.
/// Values are nominal datasheet-style figures and are not calibrated against
/// any particular board revision, with one exception: zcu102's off-chip
/// bandwidth (153.6 Gbps) and usable block-RAM capacity (about 5.1 MB at 99%
/// utilization) are the reference points the rest of the model is anchored
/// to, so its bram36 count reflects usable capacity rather than the raw
/// block count of the silicon.
const std::vector<DeviceSpec>& device_presets();
const DeviceSpec* find_preset(const std::string& name);

}  // namespace autows
