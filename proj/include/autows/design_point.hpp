#pragma once

#include <cstdint>
#include <vector>

#include "autows/calibration.hpp"
#include "autows/ce_model.hpp"
#include "autows/device.hpp"
#include "autows/layer.hpp"
#include "autows/rational.hpp"

namespace autows {

/// Immutable evaluation context shared by search and reporting.
struct DesignContext {
  NetworkGraph net;
  DeviceSpec dev;
  CalibrationTable calib;
  std::vector<int> in_edges;     // per layer, >= 1 (source reads the input stream)
  std::int64_t io_in_bits = 0;   // activation bits entering per inference
  std::int64_t io_out_bits = 0;  // activation bits leaving per inference

  static DesignContext make(NetworkGraph net, DeviceSpec dev,
                            CalibrationTable calib);
  const LayerSpec& layer(std::size_t idx) const { return net.layers[idx]; }
  std::size_t size() const { return net.layers.size(); }
};

/// Derived per-layer quantities; always recomputed from the configuration,
/// never patched in place.
struct LayerEval {
  std::int64_t cycles = 0;
  double theta = 0.0;        // solo inferences/s
  Rational slowdown = 0;     // theta_pipeline / theta = cycles / cycles_max
  Rational beta_bps = 0;     // weight stream demand at full speed
  std::int64_t repeat = 0;   // weight passes per inference (0 if unweighted)
  ResourceVector area;
};

struct DesignTotals {
  ResourceVector area;
  Rational io_bps = 0;       // input+output activation streams
  Rational stream_bps = 0;   // sum of slowdown-scaled weight streams
  Rational total_bps = 0;    // io_bps + stream_bps
  std::int64_t cycles_max = 0;
  double theta_pipeline = 0.0;
  bool area_ok = false;      // lut/ff/dsp/bram36 within device
  bool mem_ok = false;       // resident weight bits within memory budget
  bool bw_ok = false;        // total_bps within device bandwidth
  bool feasible = false;
};

struct DesignPoint {
  std::vector<CEConfig> configs;  // parallel to ctx.net.layers
  std::vector<LayerEval> evals;
  DesignTotals totals;
};

/// Full evaluation of a configuration vector.
DesignPoint evaluate(const DesignContext& ctx, std::vector<CEConfig> configs);

/// Re-derives evals[idx] from configs[idx] and refreshes totals.
void refresh_layer(const DesignContext& ctx, DesignPoint& d, std::size_t idx);

/// Recomputes slowdowns, bandwidth sums, area totals and feasibility flags.
void refresh_totals(const DesignContext& ctx, DesignPoint& d);

/// Bits of weight storage currently kept on chip / streamed, for reporting.
std::int64_t on_chip_weight_bits(const DesignContext& ctx,
                                 const DesignPoint& d, std::size_t idx);
std::int64_t off_chip_weight_bits(const DesignContext& ctx,
                                  const DesignPoint& d, std::size_t idx);

}  // namespace autows
