#include "autows/dse.hpp"

#include <algorithm>
#include <stdexcept>

namespace autows {

void DseHyperParams::validate() const {
  if (unroll_step < 1) throw std::runtime_error("unroll step must be >= 1");
  if (evict_step < 1) throw std::runtime_error("evict step must be >= 1");
}

const char* trace_action_name(TraceAction a) {
  switch (a) {
    case TraceAction::Init: return "init";
    case TraceAction::EvictMemory: return "evict_memory";
    case TraceAction::IncrementUnroll: return "increment_unroll";
    case TraceAction::Final: return "final";
  }
  return "?";
}

std::vector<std::int64_t> divisors_of(std::int64_t v) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 1; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      if (d != v / d) out.push_back(v / d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

DesignPoint initialize_design(const DesignContext& ctx) {
  std::vector<CEConfig> configs(ctx.size());
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const LayerSpec& l = ctx.layer(i);
    CEConfig& c = configs[i];
    c.unroll = {1, 1, 1};
    c.off_words = 0;
    if (op_is_weighted(l.op)) {
      WeightGeometry g = weight_geometry(l, c.unroll);
      c.frag = fragment_geometry(g.depth_words, 0, 1);
    } else {
      c.frag = {1, 0, 0};
    }
  }
  return evaluate(ctx, std::move(configs));
}

std::int64_t write_burst_balance(const DesignContext& ctx,
                                 const DesignPoint& d, std::size_t idx,
                                 std::int64_t off_words) {
  const LayerSpec& self = ctx.layer(idx);
  if (off_words < 1)
    throw std::runtime_error("write_burst_balance: nothing streamed");
  std::int64_t per_pass = self.batch * self.out_h * self.out_w;
  std::int64_t r_max = 0;
  for (std::size_t j = 0; j < ctx.size(); ++j) {
    if (j == idx) continue;
    const LayerSpec& l = ctx.layer(j);
    if (op_is_weighted(l.op))
      r_max = std::max(r_max, d.evals[j].repeat);
  }
  if (r_max == 0) r_max = per_pass;  // only weighted layer paces itself
  BigInt n = round_half_up(Rational(BigInt(r_max), BigInt(per_pass)));
  std::int64_t cap = off_words;
  if (n < 1) n = 1;
  if (n > cap) n = cap;
  return n.convert_to<std::int64_t>();
}

namespace {

/// Applies one eviction step to a config copy; returns the new config.
CEConfig evicted_config(const DesignContext& ctx, const DesignPoint& d,
                        std::size_t idx, const DseHyperParams& hp) {
  const LayerSpec& l = ctx.layer(idx);
  if (!op_is_weighted(l.op))
    throw std::runtime_error("cannot stream an unweighted layer");
  CEConfig cfg = d.configs[idx];
  WeightGeometry g = weight_geometry(l, cfg.unroll);
  if (cfg.off_words >= g.depth_words)
    throw std::runtime_error("layer " + std::to_string(l.id) +
                             " is already fully streamed");
  cfg.off_words = std::min(cfg.off_words + hp.evict_step, g.depth_words);
  std::int64_t n = write_burst_balance(ctx, d, idx, cfg.off_words);
  cfg.frag = fragment_geometry(g.depth_words, cfg.off_words, n);
  return cfg;
}

}  // namespace

Rational delta_bandwidth(const DesignContext& ctx, const DesignPoint& d,
                         std::size_t idx, const DseHyperParams& hp) {
  CEConfig next = evicted_config(ctx, d, idx, hp);
  Rational beta_next =
      weight_bandwidth(ctx.layer(idx), next, ctx.dev.clk_comp_hz);
  return d.evals[idx].slowdown * (beta_next - d.evals[idx].beta_bps);
}

void increment_offchip(const DesignContext& ctx, DesignPoint& d,
                       std::size_t idx, const DseHyperParams& hp) {
  d.configs[idx] = evicted_config(ctx, d, idx, hp);
  refresh_layer(ctx, d, idx);
  refresh_totals(ctx, d);
}

bool allocate_memory(const DesignContext& ctx, DesignPoint& d,
                     const DseHyperParams& hp, std::vector<TraceEntry>& events,
                     int& iteration) {
  // The eviction loop must drive the block-quantized BRAM footprint (static
  // weight banks, stream buffers, activation FIFOs) under the device budget;
  // comparing raw payload bits would leave the padded block count oversized.
  const Rational cap_bps{BigInt(ctx.dev.bandwidth_bps)};
  while (d.totals.area.bram36 > ctx.dev.area.bram36) {
    std::size_t best = ctx.size();
    Rational best_delta = 0;
    bool all_streamed = true;
    for (std::size_t i = 0; i < ctx.size() && hp.evict_enabled; ++i) {
      const LayerSpec& l = ctx.layer(i);
      if (!op_is_weighted(l.op)) continue;
      WeightGeometry g = weight_geometry(l, d.configs[i].unroll);
      if (d.configs[i].off_words >= g.depth_words) continue;
      all_streamed = false;
      Rational delta = delta_bandwidth(ctx, d, i, hp);
      if (best == ctx.size() || delta < best_delta) {
        best = i;
        best_delta = delta;
      }
    }
    if (best == ctx.size()) {
      // Nothing left to evict. With eviction enabled this means every weight
      // word is already streamed (only the irreducible stream buffers
      // remain); report success and let the caller's feasibility flags speak.
      return hp.evict_enabled && all_streamed && d.totals.total_bps <= cap_bps;
    }
    if (d.totals.total_bps + best_delta > cap_bps) return false;
    increment_offchip(ctx, d, best, hp);
    events.push_back({iteration++, TraceAction::EvictMemory,
                      ctx.layer(best).id, d.totals.theta_pipeline,
                      to_double(d.totals.total_bps), d.totals.area.mem_bits,
                      d.totals.feasible, burst_imbalance(ctx, d)});
  }
  // This procedure owns the bandwidth constraint as well: an unroll step can
  // raise the pipeline rate (scaling both io and stream demand) past the
  // device limit without touching memory, and the caller treats a false
  // return as the signal to stop accepting.
  return d.totals.total_bps <= cap_bps;
}

bool increment_unroll(const DesignContext& ctx, DesignPoint& d,
                      std::size_t idx, const DseHyperParams& hp) {
  const LayerSpec& l = ctx.layer(idx);
  bool weighted = op_is_weighted(l.op);
  bool windowed = op_is_windowed(l.op);
  if (!weighted && !windowed) return false;

  UnrollFactors u = d.configs[idx].unroll;
  bool raised = false;
  if (windowed && u.kernel_par < l.kernel) {
    // Window taps scale with kernel_par^2; snap to the next axis divisor
    // whose square clears the requested raise.
    std::int64_t target = u.kernel_par * u.kernel_par + hp.unroll_step;
    for (std::int64_t cand : divisors_of(l.kernel)) {
      if (cand * cand >= target) {
        u.kernel_par = cand;
        raised = true;
        break;
      }
    }
  }
  if (!raised && weighted && u.filter_par < l.filters) {
    std::int64_t target = u.filter_par + hp.unroll_step;
    for (std::int64_t cand : divisors_of(l.filters)) {
      if (cand >= target) {
        u.filter_par = cand;
        raised = true;
        break;
      }
    }
  }
  if (!raised && u.channel_par < l.channels) {
    std::int64_t target = u.channel_par + hp.unroll_step;
    for (std::int64_t cand : divisors_of(l.channels)) {
      if (cand >= target) {
        u.channel_par = cand;
        raised = true;
        break;
      }
    }
  }
  if (!raised) return false;

  CEConfig& cfg = d.configs[idx];
  cfg.unroll = u;
  if (weighted) {
    // The streamed word count carries over; the new geometry clamps it and
    // the fragment count, and the next eviction rebalances bursts.
    WeightGeometry g = weight_geometry(l, u);
    cfg.off_words = std::min(cfg.off_words, g.depth_words);
    std::int64_t n =
        cfg.off_words == 0
            ? 1
            : std::min(cfg.frag.fragments, cfg.off_words);
    cfg.frag = fragment_geometry(g.depth_words, cfg.off_words, n);
  }
  refresh_layer(ctx, d, idx);
  return true;
}

double burst_imbalance(const DesignContext& ctx, const DesignPoint& d) {
  std::int64_t r_max = 0;
  for (std::size_t i = 0; i < ctx.size(); ++i)
    if (d.configs[i].frag.streams())
      r_max = std::max(r_max, d.evals[i].repeat);
  if (r_max == 0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (!d.configs[i].frag.streams()) continue;
    double resid = static_cast<double>(r_max - d.evals[i].repeat) /
                   static_cast<double>(r_max);
    worst = std::max(worst, resid);
  }
  return worst;
}

namespace {

std::size_t slowest_layer(const DesignPoint& d) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < d.evals.size(); ++i)
    if (d.evals[i].cycles > d.evals[best].cycles) best = i;
  return best;  // ties keep the lowest index = lowest id
}

TraceEntry snapshot(int iteration, TraceAction action, int layer_id,
                    const DesignContext& ctx, const DesignPoint& d) {
  return {iteration,
          action,
          layer_id,
          d.totals.theta_pipeline,
          to_double(d.totals.total_bps),
          d.totals.area.mem_bits,
          d.totals.feasible,
          burst_imbalance(ctx, d)};
}

}  // namespace

DseResult run_dse(const DesignContext& ctx, const DseHyperParams& hp) {
  hp.validate();
  DseResult res;
  res.design = initialize_design(ctx);
  int iteration = 0;
  res.trace.push_back(
      snapshot(iteration++, TraceAction::Init, -1, ctx, res.design));

  std::vector<TraceEntry> events;
  res.memory_ok = allocate_memory(ctx, res.design, hp, events, iteration);
  res.trace.insert(res.trace.end(), events.begin(), events.end());

  while (true) {
    std::size_t idx = slowest_layer(res.design);
    DesignPoint clone = res.design;
    if (!increment_unroll(ctx, clone, idx, hp)) break;
    refresh_totals(ctx, clone);
    std::vector<TraceEntry> clone_events;
    int clone_iter = iteration;
    bool mem_ok = allocate_memory(ctx, clone, hp, clone_events, clone_iter);
    if (!mem_ok) break;
    if (!clone.totals.area_ok) break;
    res.design = std::move(clone);
    res.memory_ok = mem_ok;
    iteration = clone_iter;
    res.trace.insert(res.trace.end(), clone_events.begin(),
                     clone_events.end());
    res.trace.push_back(snapshot(iteration++, TraceAction::IncrementUnroll,
                                 ctx.layer(idx).id, ctx, res.design));
  }

  res.trace.push_back(
      snapshot(iteration, TraceAction::Final, -1, ctx, res.design));
  return res;
}

}  // namespace autows
