#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "autows/design_point.hpp"

namespace autows {

struct DseHyperParams {
  std::int64_t unroll_step = 1;   // minimum raise applied to an unroll factor
  std::int64_t evict_step = 64;   // words moved off chip per eviction
  bool evict_enabled = true;      // false = classic all-on-chip allocation

  void validate() const;
};

enum class TraceAction { Init, EvictMemory, IncrementUnroll, Final };
const char* trace_action_name(TraceAction a);

/// One accepted search step with a snapshot of the running totals.
struct TraceEntry {
  int iteration = 0;
  TraceAction action = TraceAction::Init;
  int layer_id = -1;
  double theta_pipeline = 0.0;
  double total_bw_bps = 0.0;
  std::int64_t total_mem_bits = 0;
  bool feasible = false;
  double burst_imbalance = 0.0;  // worst (r_max - r_l) / r_max over streamers
};

struct DseResult {
  DesignPoint design;
  std::vector<TraceEntry> trace;
  bool memory_ok = false;  // verdict of the last memory allocation pass
};

/// All unroll factors 1, all weights static on chip.
DesignPoint initialize_design(const DesignContext& ctx);

/// Fragment count that matches this layer's burst rate to the fastest
/// streaming peer: round(r_max / (b*oh*ow)) clamped to [1, off_words].
std::int64_t write_burst_balance(const DesignContext& ctx,
                                 const DesignPoint& d, std::size_t idx,
                                 std::int64_t off_words);

/// Change in the slowdown-scaled stream total if one more eviction step were
/// applied to layer idx. The design itself is not modified.
Rational delta_bandwidth(const DesignContext& ctx, const DesignPoint& d,
                         std::size_t idx, const DseHyperParams& hp);

/// Moves up to evict_step more words of layer idx off chip and rebalances its
/// fragment count. Throughput is unaffected; bandwidth and memory change.
void increment_offchip(const DesignContext& ctx, DesignPoint& d,
                       std::size_t idx, const DseHyperParams& hp);

/// Evicts from the cheapest-bandwidth layer until resident weight bits fit
/// the memory budget. Returns false if the bandwidth cap would be exceeded
/// (design left at the last increment that still fit) or if eviction is
/// disabled/exhausted while still over budget. Appends accepted evictions
/// to events.
bool allocate_memory(const DesignContext& ctx, DesignPoint& d,
                     const DseHyperParams& hp, std::vector<TraceEntry>& events,
                     int& iteration);

/// Raises the first unsaturated unroll dimension (window, then filters, then
/// channels) by unroll_step, snapping up to the next divisor. Carried
/// fragmentation is re-derived for the new depth. Returns false when the
/// layer has no unrollable dimension left.
bool increment_unroll(const DesignContext& ctx, DesignPoint& d,
                      std::size_t idx, const DseHyperParams& hp);

/// Greedy ascent: repeatedly unroll the slowest engine, re-fit memory, stop
/// when unrolling, memory, or area admits no further step.
DseResult run_dse(const DesignContext& ctx, const DseHyperParams& hp);

/// Worst relative burst-count shortfall (r_max - r_l) / r_max across
/// streaming layers; 0 when balanced or when fewer than two layers stream.
double burst_imbalance(const DesignContext& ctx, const DesignPoint& d);

/// Sorted divisors of v.
std::vector<std::int64_t> divisors_of(std::int64_t v);

}  // namespace autows
