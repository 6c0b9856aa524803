#pragma once

#include <cstdint>
#include <vector>

#include "autows/design_point.hpp"
#include "autows/rational.hpp"

namespace autows {

enum class SimEventKind {
  BurstStart,
  BurstEnd,
  StallBegin,
  StallEnd,
  FragmentAdvance
};
const char* sim_event_kind_name(SimEventKind k);

/// One timeline record; `fragment` is the position within the layer's
/// fragment cycle that the burst or read in question belongs to.
struct SimEvent {
  Rational t = 0;
  SimEventKind kind = SimEventKind::BurstStart;
  int layer_id = -1;
  std::int64_t fragment = 0;
};

struct LayerSimStats {
  int layer_id = -1;
  bool streaming = false;
  std::int64_t bursts = 0;
  Rational offset = 0;       // pipeline fill start of this engine
  Rational last_finish = 0;  // end of the final buffer read
  Rational stall_time = 0;
  std::int64_t stall_events = 0;
  Rational measured_beta_bps = 0;
  std::vector<Rational> stall_time_by_inference;        // streaming only
  std::vector<std::int64_t> stall_events_by_inference;  // streaming only
};

struct SimReport {
  std::int64_t horizon = 0;
  bool any_streaming = false;
  bool model_bw_feasible = false;  // the design's own bandwidth claim
  double theta_pipeline = 0.0;     // model prediction, inferences/s
  Rational achieved_theta = 0;     // simulated inferences/s
  Rational dma_utilization = 0;    // busy fraction of the burst timeline
  std::vector<LayerSimStats> layers;
  std::vector<SimEvent> events;  // populated only when requested
};

/// Cyclic burst service order. Each streaming layer appears r_l / gcd(all r)
/// times per period, spread evenly through it; simultaneous due dates fall
/// back to pipeline position. Empty when nothing streams.
std::vector<int> build_demux_sequence(const DesignContext& ctx,
                                      const DesignPoint& d);

/// Wall time for one engine to emit a single output position at pipeline
/// speed; upstream sums of these give each engine its start offset.
Rational single_output_latency(const DesignContext& ctx, const DesignPoint& d,
                               std::size_t idx);

/// Start offset of layer idx: longest producer chain of single-output
/// latencies ahead of it.
Rational pipeline_fill_offset(const DesignContext& ctx, const DesignPoint& d,
                              std::size_t idx);

/// Wall time of the first completed inference: sink offset plus one full
/// pipeline period.
Rational first_inference_latency(const DesignContext& ctx,
                                 const DesignPoint& d);

/// Replays `horizon` inferences of the weight traffic. Readers advance at
/// their throttled word rate through [static words, buffer words] per
/// fragment; one DMA serves bursts in demux order at the full bandwidth
/// left over from the activation streams; a burst may start only once the
/// buffer's previous fragment has been fully read; a reader entering the
/// buffer blocks until it can stream through behind the write pointer, and
/// that blocked interval is charged as one stall episode at entry.
/// Infeasible designs simulate normally. Throws on horizon < 1 and on
/// devices whose bandwidth cannot even cover the activation streams while
/// weights need streaming.
SimReport simulate_dma(const DesignContext& ctx, const DesignPoint& d,
                       std::int64_t horizon, bool emit_events);

struct DeviationEntry {
  int layer_id = -1;
  double measured_beta_bps = 0.0;
  double model_beta_bps = 0.0;
  double rel_error = 0.0;
};

struct DeviationSummary {
  std::vector<DeviationEntry> layers;  // streaming layers only
  double max_rel_error = 0.0;
  double theta_ratio = 1.0;  // achieved / modeled pipeline throughput
};

/// Per-layer relative error between simulated bandwidth and the analytic
/// slowdown-scaled stream demand. Throws if the report does not match the
/// design's layer set.
DeviationSummary compare_with_model(const DesignContext& ctx,
                                    const DesignPoint& d,
                                    const SimReport& rep);

}  // namespace autows
