#pragma once

#include <cstdint>
#include <vector>

#include "autows/calibration.hpp"
#include "autows/layer.hpp"
#include "autows/rational.hpp"
#include "autows/resources.hpp"

namespace autows {

/// Parallelism of one compute engine. Each factor divides its dimension;
/// the kernel window is unrolled per axis, so a window factor of kernel_par
/// contributes kernel_par^2 parallel taps.
struct UnrollFactors {
  std::int64_t kernel_par = 1;
  std::int64_t channel_par = 1;
  std::int64_t filter_par = 1;

  void validate(const LayerSpec& l) const;  // divisibility
  std::int64_t kernel_trip(const LayerSpec& l) const {
    return (l.kernel / kernel_par) * (l.kernel / kernel_par);
  }
  std::int64_t channel_trip(const LayerSpec& l) const {
    return l.channels / channel_par;
  }
  std::int64_t filter_trip(const LayerSpec& l) const {
    return l.filters / filter_par;
  }
  /// Parallel MAC lanes driven per cycle.
  std::int64_t mac_lanes() const {
    return filter_par * channel_par * kernel_par * kernel_par;
  }

  bool operator==(const UnrollFactors& o) const = default;
};

/// Logical weight memory of one engine: depth in words sequenced over time,
/// width in bits read per cycle. depth * width always equals
/// filters * channels * kernel^2 * weight_bits.
struct WeightGeometry {
  std::int64_t depth_words = 0;
  std::int64_t width_bits = 0;
};

/// Split of the weight memory depth into fragments: each of the `fragments`
/// fragments holds on_depth words in static on-chip storage plus off_depth
/// words refilled from off-chip into a shared buffer. Ceil division pads each
/// region by at most fragments-1 words.
struct Fragmentation {
  std::int64_t fragments = 1;
  std::int64_t on_depth = 0;
  std::int64_t off_depth = 0;

  std::int64_t padded_depth() const {
    return fragments * (on_depth + off_depth);
  }
  bool streams() const { return off_depth > 0; }

  bool operator==(const Fragmentation& o) const = default;
};

/// Full configuration of one engine. off_words is the streamed share of the
/// weight depth the search assigned (before ceil padding); unweighted layers
/// always keep {1, 0, 0} fragmentation and off_words 0.
struct CEConfig {
  UnrollFactors unroll;
  Fragmentation frag;
  std::int64_t off_words = 0;

  bool operator==(const CEConfig& o) const = default;
};

/// Weight memory shape for a weighted layer under the given unroll.
/// Throws for unweighted ops.
WeightGeometry weight_geometry(const LayerSpec& l, const UnrollFactors& u);

/// Fragment split: off_depth = ceil(off_words / fragments),
/// on_depth = ceil((depth - off_words) / fragments).
/// Requires 0 <= off_words <= depth and, when off_words > 0,
/// 1 <= fragments <= off_words (each fragment must stream at least a word).
Fragmentation fragment_geometry(std::int64_t depth_words,
                                std::int64_t off_words,
                                std::int64_t fragments);

/// Weight-memory read passes per inference: batch * out_h * out_w * fragments.
std::int64_t repeat_count(const LayerSpec& l, std::int64_t fragments);

/// Compute cycles for one inference at the given unroll (pipeline fill
/// excluded). Conv: b*oh*ow*kt^2*ct*ft; FC: b*ct*ft; Pool: b*oh*ow*kt^2*ct;
/// EltwiseAdd/Activation: b*h*w*ct.
std::int64_t inference_cycles(const LayerSpec& l, const UnrollFactors& u);

/// Solo throughput in inferences/second at the compute clock.
double throughput(const LayerSpec& l, const UnrollFactors& u,
                  std::int64_t clk_comp_hz);

/// Average off-chip weight bandwidth demanded by the engine at full speed:
/// width * clk * off_depth / (on_depth + off_depth), in bits/s. Exact.
Rational weight_bandwidth(const LayerSpec& l, const CEConfig& cfg,
                          std::int64_t clk_comp_hz);

/// Resource cost of one engine: DSP for the MAC lanes, LUT/FF from the linear
/// calibration model, BRAM blocks for static weights, the stream buffer, and
/// activation FIFOs/line buffers. mem_bits counts resident weight bits only:
/// width * (fragments * on_depth + off_depth).
ResourceVector engine_area(const LayerSpec& l, const CEConfig& cfg,
                           const CalibrationTable& calib, int in_edges);

/// Block counts by category, for reporting.
struct BramBreakdown {
  std::int64_t weight_static = 0;
  std::int64_t weight_buffer = 0;
  std::int64_t act_fifo = 0;
};
BramBreakdown engine_bram_breakdown(const LayerSpec& l, const CEConfig& cfg,
                                    const CalibrationTable& calib,
                                    int in_edges);

}  // namespace autows
