#pragma once

#include <string>
#include <vector>

#include "autows/design_point.hpp"
#include "autows/dma_sim.hpp"
#include "autows/dse.hpp"

namespace autows {

/// A parsed design file: the full inputs plus the chosen configuration.
/// Summary values stored alongside are checked against re-evaluation at
/// parse time, so a loaded bundle is always internally consistent.
struct DesignBundle {
  NetworkGraph net;
  DeviceSpec dev;
  CalibrationTable calib;
  DseHyperParams hp;
  std::vector<CEConfig> configs;
  bool memory_ok = false;
  bool feasible = false;
};

/// Self-contained design file: inputs, per-engine configuration and derived
/// metrics, totals, and the marginal bandwidth cost of one further eviction
/// per layer.
std::string serialize_design_json(const DesignContext& ctx,
                                  const DesignPoint& d,
                                  const DseHyperParams& hp, bool memory_ok);

/// Strict parse + re-evaluation check; throws std::runtime_error on schema
/// or consistency violations.
DesignBundle parse_design_json(const std::string& text);

/// Bandwidth, memory, compute and timing summary with category splits that
/// sum to the printed totals. All floats use 6 significant digits.
std::string render_breakdown_csv(const DesignContext& ctx,
                                 const DesignPoint& d);

std::string render_trace_jsonl(const std::vector<TraceEntry>& trace);

/// Simulation outcome with the per-layer model-vs-measured deviation table.
std::string serialize_sim_report_json(const DesignContext& ctx,
                                      const DesignPoint& d,
                                      const SimReport& rep);

std::string render_events_jsonl(const SimReport& rep);

enum class SweepParam { MemBudget, Bandwidth };

/// Copy of the base device with the swept capacity scaled to the fraction.
/// Memory scaling adjusts the block count (and with it the bit budget);
/// bandwidth scaling adjusts the link rate.
DeviceSpec scale_device(const DeviceSpec& base, SweepParam param,
                        double fraction);

struct SweepPoint {
  double fraction = 0.0;
  bool ws_feasible = false;
  double ws_fps = 0.0;
  double ws_stream_norm = 0.0;  // streamed weight bw / device bandwidth
  bool vanilla_feasible = false;
  double vanilla_fps = 0.0;
};

/// One streaming-enabled and one eviction-disabled search per fraction.
/// Points run concurrently; rows come back in input order. Fractions must
/// be strictly increasing and positive.
std::vector<SweepPoint> run_sweep(const NetworkGraph& net,
                                  const DeviceSpec& dev,
                                  const CalibrationTable& calib,
                                  SweepParam param,
                                  const std::vector<double>& fractions,
                                  const DseHyperParams& hp);

std::string render_sweep_csv(SweepParam param,
                             const std::vector<SweepPoint>& points);

}  // namespace autows
