#include "autows/dma_sim.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace autows {

const char* sim_event_kind_name(SimEventKind k) {
  switch (k) {
    case SimEventKind::BurstStart: return "burst_start";
    case SimEventKind::BurstEnd: return "burst_end";
    case SimEventKind::StallBegin: return "stall_begin";
    case SimEventKind::StallEnd: return "stall_end";
    case SimEventKind::FragmentAdvance: return "fragment_advance";
  }
  return "?";
}

std::vector<int> build_demux_sequence(const DesignContext& ctx,
                                      const DesignPoint& d) {
  std::vector<std::size_t> streaming;
  for (std::size_t i = 0; i < ctx.size(); ++i)
    if (d.configs[i].frag.streams()) streaming.push_back(i);
  if (streaming.empty()) return {};

  std::int64_t g = 0;
  for (std::size_t i : streaming) g = std::gcd(g, d.evals[i].repeat);

  // One due date per slot: slot k of a layer with `count` slots per period
  // is due at (k+1)/count. Sorting due dates interleaves the layers evenly.
  struct Slot {
    Rational due;
    std::size_t order;
    int id;
  };
  std::vector<Slot> slots;
  for (std::size_t pos = 0; pos < streaming.size(); ++pos) {
    std::size_t i = streaming[pos];
    std::int64_t count = d.evals[i].repeat / g;
    for (std::int64_t k = 0; k < count; ++k)
      slots.push_back({make_ratio(k + 1, count), pos, ctx.layer(i).id});
  }
  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
    if (a.due != b.due) return a.due < b.due;
    return a.order < b.order;
  });

  std::vector<int> seq;
  seq.reserve(slots.size());
  for (const Slot& s : slots) seq.push_back(s.id);
  return seq;
}

Rational single_output_latency(const DesignContext& ctx, const DesignPoint& d,
                               std::size_t idx) {
  const LayerSpec& l = ctx.layer(idx);
  BigInt positions = BigInt(l.batch) * l.out_h * l.out_w;
  return Rational(BigInt(d.totals.cycles_max),
                  BigInt(ctx.dev.clk_comp_hz) * positions);
}

namespace {

std::vector<Rational> all_offsets(const DesignContext& ctx,
                                  const DesignPoint& d) {
  // Edges always point toward higher ids, so ascending-id order is a
  // topological order.
  std::vector<int> order(ctx.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return ctx.layer(a).id < ctx.layer(b).id;
  });
  std::map<int, std::size_t> by_id;
  for (std::size_t i = 0; i < ctx.size(); ++i) by_id[ctx.layer(i).id] = i;

  std::vector<Rational> offset(ctx.size(), Rational(0));
  for (int oi : order) {
    std::size_t i = static_cast<std::size_t>(oi);
    Rational best = 0;
    for (int pid : ctx.net.producers_of(ctx.layer(i).id)) {
      std::size_t p = by_id.at(pid);
      Rational cand = offset[p] + single_output_latency(ctx, d, p);
      if (cand > best) best = cand;
    }
    offset[i] = best;
  }
  return offset;
}

}  // namespace

Rational pipeline_fill_offset(const DesignContext& ctx, const DesignPoint& d,
                              std::size_t idx) {
  return all_offsets(ctx, d)[idx];
}

Rational first_inference_latency(const DesignContext& ctx,
                                 const DesignPoint& d) {
  auto offsets = all_offsets(ctx, d);
  std::size_t sink = 0;
  int sink_id = ctx.net.sink_id();
  for (std::size_t i = 0; i < ctx.size(); ++i)
    if (ctx.layer(i).id == sink_id) sink = i;
  return offsets[sink] + Rational(BigInt(d.totals.cycles_max),
                                  BigInt(ctx.dev.clk_comp_hz));
}

SimReport simulate_dma(const DesignContext& ctx, const DesignPoint& d,
                       std::int64_t horizon, bool emit_events) {
  if (horizon < 1) throw std::runtime_error("simulation horizon must be >= 1");
  if (d.configs.size() != ctx.size() || d.evals.size() != ctx.size())
    throw std::runtime_error("design does not match the network");

  SimReport rep;
  rep.horizon = horizon;
  rep.model_bw_feasible = d.totals.bw_ok;
  rep.theta_pipeline = d.totals.theta_pipeline;

  auto offsets = all_offsets(ctx, d);
  rep.layers.resize(ctx.size());
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    rep.layers[i].layer_id = ctx.layer(i).id;
    rep.layers[i].streaming = d.configs[i].frag.streams();
    rep.layers[i].offset = offsets[i];
    rep.any_streaming |= rep.layers[i].streaming;
  }
  if (!rep.any_streaming) {
    rep.achieved_theta = Rational(BigInt(ctx.dev.clk_comp_hz),
                                  BigInt(d.totals.cycles_max));
    return rep;
  }

  const Rational weight_bw =
      Rational(BigInt(ctx.dev.bandwidth_bps)) - d.totals.io_bps;
  if (weight_bw <= 0)
    throw std::runtime_error(
        "device bandwidth does not cover the activation streams; no "
        "capacity left for weight bursts");

  struct Reader {
    std::size_t idx = 0;
    std::int64_t u_on = 0, u_off = 0, fragments = 1;
    std::int64_t repeat = 0;        // bursts per inference
    std::int64_t served = 0;        // bursts completed so far
    Rational inv_rho = 0;           // seconds per word read
    Rational inv_w = 0;             // seconds per word written
    bool writer_keeps_ahead = false;  // w >= rho
    Rational free_at = 0;           // buffer fully drained of previous burst
    bool first = true;
  };

  std::map<int, std::size_t> reader_of;  // layer id -> readers index
  std::vector<Reader> readers;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (!d.configs[i].frag.streams()) continue;
    const LayerSpec& l = ctx.layer(i);
    Reader r;
    r.idx = i;
    r.u_on = d.configs[i].frag.on_depth;
    r.u_off = d.configs[i].frag.off_depth;
    r.fragments = d.configs[i].frag.fragments;
    r.repeat = d.evals[i].repeat;
    r.inv_rho = Rational(BigInt(d.totals.cycles_max),
                         BigInt(d.evals[i].cycles) * ctx.dev.clk_comp_hz);
    std::int64_t width = weight_geometry(l, d.configs[i].unroll).width_bits;
    r.inv_w = Rational(BigInt(width)) / weight_bw;
    r.writer_keeps_ahead = r.inv_w <= r.inv_rho;
    reader_of[l.id] = readers.size();
    readers.push_back(r);
  }

  std::vector<int> seq = build_demux_sequence(ctx, d);
  std::int64_t g = 0;
  for (const Reader& r : readers) g = std::gcd(g, r.repeat);
  const std::int64_t total_slots =
      static_cast<std::int64_t>(seq.size()) * g * horizon;

  for (Reader& r : readers) {
    LayerSimStats& st = rep.layers[r.idx];
    st.stall_time_by_inference.assign(horizon, Rational(0));
    st.stall_events_by_inference.assign(horizon, 0);
  }

  Rational cursor = 0;     // DMA timeline
  Rational busy = 0;       // accumulated burst time
  for (std::int64_t q = 0; q < total_slots; ++q) {
    Reader& r = readers[reader_of.at(seq[q % seq.size()])];
    LayerSimStats& st = rep.layers[r.idx];
    const std::int64_t m = r.served;
    const std::int64_t frag = m % r.fragments;

    // Reader chains phases back to back: static words first, then the
    // buffer. The burst may not start before the previous buffer load was
    // drained; the DMA waits in place (strictly cyclic, no reordering).
    Rational enter_ready = (r.first ? st.offset : r.free_at) +
                           r.inv_rho * r.u_on;
    Rational gate = r.first ? Rational(0) : r.free_at;
    Rational start = std::max(cursor, gate);
    Rational burst_end = start + r.inv_w * r.u_off;
    cursor = burst_end;
    busy += r.inv_w * r.u_off;

    // Finish of the buffer read: either the reader was never held up, or it
    // trails the writer. A fast writer only delays the first word; a slow
    // writer paces the whole drain.
    Rational unconstrained = enter_ready + r.inv_rho * r.u_off;
    Rational trailing;
    if (r.writer_keeps_ahead)
      trailing = start + r.inv_w + r.inv_rho * r.u_off;
    else
      trailing = start + r.inv_w * r.u_off + r.inv_rho;
    Rational finish = std::max(unconstrained, trailing);
    Rational stall = finish - unconstrained;

    if (emit_events) {
      rep.events.push_back({start, SimEventKind::BurstStart,
                            ctx.layer(r.idx).id, frag});
      rep.events.push_back({burst_end, SimEventKind::BurstEnd,
                            ctx.layer(r.idx).id, frag});
      rep.events.push_back({finish, SimEventKind::FragmentAdvance,
                            ctx.layer(r.idx).id, frag});
    }
    if (stall > 0) {
      std::int64_t inference = m / r.repeat;
      st.stall_time += stall;
      st.stall_events += 1;
      st.stall_time_by_inference[inference] += stall;
      st.stall_events_by_inference[inference] += 1;
      if (emit_events) {
        rep.events.push_back({enter_ready, SimEventKind::StallBegin,
                              ctx.layer(r.idx).id, frag});
        rep.events.push_back({enter_ready + stall, SimEventKind::StallEnd,
                              ctx.layer(r.idx).id, frag});
      }
    }

    r.free_at = finish;
    r.first = false;
    r.served += 1;
    st.bursts += 1;
    st.last_finish = finish;
  }

  Rational worst_theta = 0;
  bool have_theta = false;
  for (const Reader& r : readers) {
    LayerSimStats& st = rep.layers[r.idx];
    const LayerSpec& l = ctx.layer(r.idx);
    std::int64_t width = weight_geometry(l, d.configs[r.idx].unroll).width_bits;
    Rational span = st.last_finish - st.offset;
    st.measured_beta_bps =
        Rational(BigInt(st.bursts) * r.u_off * width) / span;
    Rational theta = Rational(BigInt(horizon)) / span;
    if (!have_theta || theta < worst_theta) {
      worst_theta = theta;
      have_theta = true;
    }
  }
  rep.achieved_theta = worst_theta;
  if (cursor > 0) rep.dma_utilization = busy / cursor;

  std::sort(rep.events.begin(), rep.events.end(),
            [](const SimEvent& a, const SimEvent& b) {
              if (a.t != b.t) return a.t < b.t;
              if (a.kind != b.kind) return a.kind < b.kind;
              return a.layer_id < b.layer_id;
            });
  return rep;
}

DeviationSummary compare_with_model(const DesignContext& ctx,
                                    const DesignPoint& d,
                                    const SimReport& rep) {
  if (rep.layers.size() != ctx.size())
    throw std::runtime_error("report does not match the design's layer set");
  for (std::size_t i = 0; i < ctx.size(); ++i)
    if (rep.layers[i].layer_id != ctx.layer(i).id ||
        rep.layers[i].streaming != d.configs[i].frag.streams())
      throw std::runtime_error("report does not match the design's layer set");

  DeviationSummary out;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (!rep.layers[i].streaming) continue;
    DeviationEntry e;
    e.layer_id = ctx.layer(i).id;
    e.measured_beta_bps = to_double(rep.layers[i].measured_beta_bps);
    e.model_beta_bps =
        to_double(d.evals[i].slowdown * d.evals[i].beta_bps);
    e.rel_error = std::abs(e.measured_beta_bps - e.model_beta_bps) /
                  std::max(e.model_beta_bps, 1.0);
    out.max_rel_error = std::max(out.max_rel_error, e.rel_error);
    out.layers.push_back(e);
  }
  if (rep.theta_pipeline > 0)
    out.theta_ratio = to_double(rep.achieved_theta) / rep.theta_pipeline;
  return out;
}

}  // namespace autows
