#include "autows/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace autows {

namespace {

struct Candidate {
  CEConfig cfg;
  std::int64_t cycles = 0;
  ResourceVector area;
  /// cycles * beta: the layer's contribution to stream_bps * cycles_max,
  /// independent of which cycles_max the full point ends up with.
  Rational stream_weight = 0;
};

std::vector<Candidate> layer_candidates(const DesignContext& ctx,
                                        std::size_t idx,
                                        const DseHyperParams& hp,
                                        const OracleCaps& caps) {
  const LayerSpec& l = ctx.layer(idx);
  const bool weighted = op_is_weighted(l.op);
  const bool windowed = op_is_windowed(l.op);

  std::vector<UnrollFactors> unrolls;
  if (weighted || windowed) {
    auto ks = windowed ? divisors_of(l.kernel) : std::vector<std::int64_t>{1};
    auto fs = weighted ? divisors_of(l.filters) : std::vector<std::int64_t>{1};
    auto cs = divisors_of(l.channels);
    for (auto kp : ks)
      for (auto fp : fs)
        for (auto cp : cs) unrolls.push_back({kp, cp, fp});
  } else {
    unrolls.push_back({1, 1, 1});
  }

  std::vector<Candidate> out;
  for (const auto& u : unrolls) {
    if (!weighted) {
      Candidate c;
      c.cfg = {u, {1, 0, 0}, 0};
      c.cycles = inference_cycles(l, u);
      c.area = engine_area(l, c.cfg, ctx.calib, ctx.in_edges[idx]);
      out.push_back(std::move(c));
      continue;
    }
    WeightGeometry g = weight_geometry(l, u);
    std::vector<std::int64_t> offs{0};
    if (hp.evict_enabled) {
      for (std::int64_t off = hp.evict_step; off < g.depth_words;
           off += hp.evict_step)
        offs.push_back(off);
      offs.push_back(g.depth_words);
    }
    for (auto off : offs) {
      std::int64_t n_hi = off == 0 ? 1 : std::min(off, caps.max_fragments);
      for (std::int64_t n = 1; n <= n_hi; ++n) {
        Candidate c;
        c.cfg = {u, fragment_geometry(g.depth_words, off, n), off};
        c.cycles = inference_cycles(l, u);
        c.area = engine_area(l, c.cfg, ctx.calib, ctx.in_edges[idx]);
        c.stream_weight = Rational(BigInt(c.cycles)) *
                          weight_bandwidth(l, c.cfg, ctx.dev.clk_comp_hz);
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

struct Search {
  const DesignContext& ctx;
  const std::vector<std::vector<Candidate>>& cands;
  BigInt io_weight;   // clk * io bits: io_bps * cycles_max
  Rational cap_mass;  // bandwidth_bps as a rational

  std::vector<ResourceVector> tail_min_area;     // suffix sums of mins
  std::vector<std::int64_t> tail_floor_cycles;   // suffix max of min cycles

  std::vector<std::size_t> pick;
  std::vector<std::size_t> best_pick;
  bool found = false;
  std::int64_t best_cycles = std::numeric_limits<std::int64_t>::max();
  std::int64_t best_area_sum = 0;
  Rational best_stream = 0;
  std::int64_t visited = 0;

  static std::int64_t area_sum(const ResourceVector& a) {
    return a.lut + a.ff + a.dsp + a.bram36;
  }

  bool area_over(const ResourceVector& a) const {
    return a.lut > ctx.dev.area.lut || a.ff > ctx.dev.area.ff ||
           a.dsp > ctx.dev.area.dsp || a.bram36 > ctx.dev.area.bram36 ||
           a.mem_bits > ctx.dev.mem_budget_bits();
  }

  void walk(std::size_t i, const ResourceVector& area, const Rational& stream,
            std::int64_t cycles_max) {
    std::int64_t floor_cycles = std::max(cycles_max, tail_floor_cycles[i]);
    if (floor_cycles > best_cycles) return;
    if (area_over(area + tail_min_area[i])) return;
    if (i == cands.size()) {
      ++visited;
      // Bandwidth scaled by cycles_max: stream + io_weight <= B * cycles_max.
      if (stream + Rational(io_weight) > cap_mass * cycles_max) return;
      std::int64_t asum = area_sum(area);
      if (found) {
        if (cycles_max > best_cycles) return;
        if (cycles_max == best_cycles) {
          if (asum > best_area_sum) return;
          if (asum == best_area_sum && stream >= best_stream) return;
        }
      }
      found = true;
      best_cycles = cycles_max;
      best_area_sum = asum;
      best_stream = stream;
      best_pick = pick;
      return;
    }
    for (std::size_t c = 0; c < cands[i].size(); ++c) {
      const Candidate& cand = cands[i][c];
      pick[i] = c;
      walk(i + 1, area + cand.area, stream + cand.stream_weight,
           std::max(cycles_max, cand.cycles));
    }
  }
};

}  // namespace

OracleResult exhaustive_search(const DesignContext& ctx,
                               const DseHyperParams& hp,
                               const OracleCaps& caps) {
  hp.validate();
  std::vector<std::vector<Candidate>> cands;
  cands.reserve(ctx.size());
  BigInt space = 1;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    cands.push_back(layer_candidates(ctx, i, hp, caps));
    space *= BigInt(cands.back().size());
  }
  if (space > BigInt(caps.max_points))
    throw std::runtime_error("exhaustive search space of " + space.str() +
                             " points exceeds the cap of " +
                             std::to_string(caps.max_points));

  Search s{ctx,
           cands,
           BigInt(ctx.dev.clk_comp_hz) *
               BigInt(ctx.io_in_bits + ctx.io_out_bits),
           Rational(BigInt(ctx.dev.bandwidth_bps)),
           {},
           {},
           {},
           {},
           false,
           std::numeric_limits<std::int64_t>::max(),
           0,
           0,
           0};
  s.pick.assign(ctx.size(), 0);

  // Suffix bounds for pruning: componentwise-minimal area still to come and
  // the largest unavoidable per-layer cycle count.
  s.tail_min_area.assign(ctx.size() + 1, ResourceVector{});
  s.tail_floor_cycles.assign(ctx.size() + 1, 0);
  for (std::size_t i = ctx.size(); i-- > 0;) {
    ResourceVector lo = cands[i].front().area;
    std::int64_t cyc = cands[i].front().cycles;
    for (const Candidate& c : cands[i]) {
      lo.lut = std::min(lo.lut, c.area.lut);
      lo.ff = std::min(lo.ff, c.area.ff);
      lo.dsp = std::min(lo.dsp, c.area.dsp);
      lo.bram36 = std::min(lo.bram36, c.area.bram36);
      lo.mem_bits = std::min(lo.mem_bits, c.area.mem_bits);
      cyc = std::min(cyc, c.cycles);
    }
    s.tail_min_area[i] = s.tail_min_area[i + 1] + lo;
    s.tail_floor_cycles[i] = std::max(s.tail_floor_cycles[i + 1], cyc);
  }

  s.walk(0, ResourceVector{}, Rational(0), 0);

  OracleResult res;
  res.space = space.convert_to<std::int64_t>();
  res.visited = s.visited;
  res.found = s.found;
  if (s.found) {
    std::vector<CEConfig> configs(ctx.size());
    for (std::size_t i = 0; i < ctx.size(); ++i)
      configs[i] = cands[i][s.best_pick[i]].cfg;
    res.best = evaluate(ctx, std::move(configs));
  }
  return res;
}

}  // namespace autows
