#include "autows/device.hpp"

#include <stdexcept>

namespace autows {

void DeviceSpec::validate() const {
  auto positive = [&](std::int64_t v, const char* what) {
    if (v < 1)
      throw std::runtime_error("device " + name + ": " + what +
                               " must be positive");
  };
  positive(bandwidth_bps, "bandwidth");
  positive(clk_comp_hz, "clk_comp");
  positive(clk_dma_hz, "clk_dma");
  positive(area.lut, "lut");
  positive(area.ff, "ff");
  positive(area.dsp, "dsp");
  positive(area.bram36, "bram36");
  if (area.mem_bits != mem_budget_bits())
    throw std::runtime_error("device " + name +
                             ": mem_bits inconsistent with bram36 count");
}

namespace {

DeviceSpec make(const char* name, double gbps, std::int64_t comp_mhz,
                std::int64_t dma_mhz, std::int64_t lut, std::int64_t ff,
                std::int64_t dsp, std::int64_t bram36) {
  DeviceSpec d;
  d.name = name;
  d.bandwidth_bps = static_cast<std::int64_t>(gbps * 1e9 + 0.5);
  d.clk_comp_hz = comp_mhz * 1'000'000;
  d.clk_dma_hz = dma_mhz * 1'000'000;
  d.area = {lut, ff, dsp, bram36, bram36 * kBram36Bits};
  return d;
}

}  // namespace

const std::vector<DeviceSpec>& device_presets() {
  static const std::vector<DeviceSpec> presets = {
      make("zedboard", 34.1, 100, 200, 53200, 106400, 220, 140),
      make("zc706", 68.3, 150, 300, 218600, 437200, 900, 545),
      make("zcu102", 153.6, 200, 400, 274080, 548160, 2520, 1118),
      make("u50", 3680.0, 300, 450, 872000, 1743000, 5952, 1344),
      make("u250", 614.4, 300, 500, 1728000, 3456000, 12288, 2000),
  };
  return presets;
}

const DeviceSpec* find_preset(const std::string& name) {
  for (const auto& d : device_presets())
    if (d.name == name) return &d;
  return nullptr;
}

}  // namespace autows
