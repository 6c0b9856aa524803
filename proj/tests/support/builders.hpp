#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "autows/calibration.hpp"
#include "autows/ce_model.hpp"
#include "autows/design_point.hpp"
#include "autows/device.hpp"
#include "autows/dse.hpp"
#include "autows/layer.hpp"

namespace autows::testing {

LayerSpec conv_layer(int id, std::int64_t channels, std::int64_t hw,
                     std::int64_t kernel, std::int64_t filters,
                     int weight_bits = 8, int act_bits = 8);
LayerSpec fc_layer(int id, std::int64_t channels, std::int64_t filters,
                   int weight_bits = 8, int act_bits = 8);
LayerSpec pool_layer(int id, std::int64_t channels, std::int64_t hw,
                     std::int64_t kernel, int act_bits = 8);
LayerSpec act_layer(int id, std::int64_t channels, std::int64_t hw,
                    int act_bits = 8);

/// Linear pipeline: edge i -> i+1 for consecutive layers, shapes validated.
NetworkGraph chain(std::vector<LayerSpec> layers,
                   const char* name = "test-net");

/// Device with explicit knobs; memory capacity follows the block count.
DeviceSpec bench_device(std::int64_t bandwidth_bps, std::int64_t bram36,
                        std::int64_t dsp = 100000,
                        std::int64_t lut = 50'000'000,
                        std::int64_t clk_comp_hz = 200'000'000);

/// A ready-to-simulate network/device/design triple.
struct StreamFixture {
  DesignContext ctx;
  DesignPoint design;
};

/// Single streaming conv with exact fragment splits (no padding) and the
/// device bandwidth set to hold the stream at a safe fraction of capacity,
/// which keeps the steady schedule stall-free. Draws geometry, fragment
/// count, unroll, word width and the utilization margin from `rng`.
StreamFixture random_stream_fixture(std::mt19937_64& rng);

/// Two-layer pipeline whose second engine refills its buffer four times as
/// often as the first (r ratio 4:1). With `rebalanced` the first engine is
/// split into four fragments instead, equalizing the burst counts.
StreamFixture burst_mismatch_fixture(bool rebalanced,
                                     std::int64_t bandwidth_bps =
                                         2'200'000'000);

/// Small 2-3 layer network plus a deliberately tight device, sized so the
/// exhaustive reference search stays below`max_points` candidates.
struct SmallInstance {
  NetworkGraph net;
  DeviceSpec dev;
  DseHyperParams hp;
};
SmallInstance random_small_instance(std::mt19937_64& rng);

}  // namespace autows::testing
