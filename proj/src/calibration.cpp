#include "autows/calibration.hpp"

#include <stdexcept>

namespace autows {

double CalibrationTable::dsp_per_mac(int weight_bits, int act_bits) const {
  auto it = dsp_per_mac_override.find({weight_bits, act_bits});
  if (it != dsp_per_mac_override.end()) return it->second;
  // Two narrow MACs share one DSP when weights are 4 bits or less.
  return weight_bits <= 4 ? 0.5 : 1.0;
}

std::int64_t bram_depth_at_width(const CalibrationTable& calib,
                                 std::int64_t width_bits) {
  if (width_bits < 1) throw std::runtime_error("bram width must be positive");
  std::int64_t cap = calib.bram_depth_cap;
  std::int64_t w = width_bits;
  while (w * 2 <= 36) {
    cap *= 2;
    w *= 2;
  }
  return cap;
}

std::int64_t bram_blocks(const CalibrationTable& calib,
                         std::int64_t depth_words, std::int64_t width_bits) {
  if (depth_words == 0) return 0;
  if (width_bits > 36) {
    std::int64_t lanes = (width_bits + 35) / 36;
    std::int64_t per_lane =
        (depth_words + calib.bram_depth_cap - 1) / calib.bram_depth_cap;
    return lanes * per_lane;
  }
  std::int64_t cap = bram_depth_at_width(calib, width_bits);
  return (depth_words + cap - 1) / cap;
}

}  // namespace autows
