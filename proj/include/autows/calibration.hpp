#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

namespace autows {

/// Per-target cost coefficients for the analytical resource model.
/// Defaults approximate a DSP48E2-class fabric: one DSP per MAC at 8-bit
/// operands, two 4-bit MACs packed per DSP, and BRAM36 packing of 1024 words
/// at 36-bit width where halving the word width doubles the usable depth.
struct CalibrationTable {
  /// Explicit overrides keyed by (weight_bits, act_bits); consulted before
  /// the default precision rule.
  std::map<std::pair<int, int>, double> dsp_per_mac_override;

  double lut_base = 300.0;      // per-engine control overhead
  double lut_per_mac = 30.0;    // operand routing + reduction per MAC lane
  double lut_per_port = 25.0;   // address muxing per memory fragment
  std::int64_t fifo_words_per_edge = 512;  // inter-engine stream FIFO depth
  std::int64_t bram_depth_cap = 1024;      // words per block at 36-bit width

  double dsp_per_mac(int weight_bits, int act_bits) const;

  bool operator==(const CalibrationTable& o) const = default;
};

/// Usable word depth of one BRAM36 at the given word width; the base cap
/// doubles each time the width halves (36 -> 1024, 18 -> 2048, ...).
std::int64_t bram_depth_at_width(const CalibrationTable& calib,
                                 std::int64_t width_bits);

/// Whole BRAM36 blocks for a memory of depth_words x width_bits.
/// Wide memories are sliced into 36-bit lanes; narrow ones use the deeper
/// packing modes.
std::int64_t bram_blocks(const CalibrationTable& calib,
                         std::int64_t depth_words, std::int64_t width_bits);

}  // namespace autows
