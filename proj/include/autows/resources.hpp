#pragma once

#include <cstdint>

namespace autows {

/// FPGA resource bundle. Componentwise arithmetic and ordering; mem_bits
/// tracks the bits actually resident in block RAM (weights), which is the
/// quantity checked against the device memory budget. bram36 counts whole
/// 36 Kb blocks after width/depth packing, so bram36 * 36864 >= mem_bits.
struct ResourceVector {
  std::int64_t lut = 0;
  std::int64_t ff = 0;
  std::int64_t dsp = 0;
  std::int64_t bram36 = 0;
  std::int64_t mem_bits = 0;

  ResourceVector& operator+=(const ResourceVector& o) {
    lut += o.lut;
    ff += o.ff;
    dsp += o.dsp;
    bram36 += o.bram36;
    mem_bits += o.mem_bits;
    return *this;
  }

  friend ResourceVector operator+(ResourceVector a, const ResourceVector& b) {
    a += b;
    return a;
  }

  /// Componentwise <=; used for the area constraint.
  bool fits_within(const ResourceVector& cap) const {
    return lut <= cap.lut && ff <= cap.ff && dsp <= cap.dsp &&
           bram36 <= cap.bram36 && mem_bits <= cap.mem_bits;
  }

  bool operator==(const ResourceVector& o) const = default;
};

}  // namespace autows
