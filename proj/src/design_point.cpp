#include "autows/design_point.hpp"

#include <algorithm>
#include <stdexcept>

namespace autows {

DesignContext DesignContext::make(NetworkGraph net, DeviceSpec dev,
                                  CalibrationTable calib) {
  DesignContext ctx;
  ctx.net = std::move(net);
  ctx.dev = std::move(dev);
  ctx.calib = std::move(calib);
  ctx.dev.validate();
  for (const auto& l : ctx.net.layers) {
    int deg = static_cast<int>(ctx.net.producers_of(l.id).size());
    ctx.in_edges.push_back(std::max(1, deg));
  }
  const LayerSpec& first = ctx.net.layer(ctx.net.source_id());
  const LayerSpec& last = ctx.net.layer(ctx.net.sink_id());
  ctx.io_in_bits = first.batch * first.channels * first.in_h * first.in_w *
                   first.act_bits;
  ctx.io_out_bits =
      last.batch * last.filters * last.out_h * last.out_w * last.act_bits;
  return ctx;
}

namespace {

void check_config(const LayerSpec& l, const CEConfig& cfg) {
  cfg.unroll.validate(l);
  if (!op_is_weighted(l.op)) {
    if (cfg.frag != Fragmentation{1, 0, 0} || cfg.off_words != 0)
      throw std::runtime_error("layer " + std::to_string(l.id) +
                               ": unweighted engines hold no weight fragments");
    return;
  }
  WeightGeometry g = weight_geometry(l, cfg.unroll);
  Fragmentation expect =
      fragment_geometry(g.depth_words, cfg.off_words, cfg.frag.fragments);
  if (expect != cfg.frag)
    throw std::runtime_error("layer " + std::to_string(l.id) +
                             ": fragmentation inconsistent with off_words");
}

}  // namespace

void refresh_layer(const DesignContext& ctx, DesignPoint& d, std::size_t idx) {
  const LayerSpec& l = ctx.layer(idx);
  const CEConfig& cfg = d.configs[idx];
  check_config(l, cfg);
  LayerEval& e = d.evals[idx];
  e.cycles = inference_cycles(l, cfg.unroll);
  e.theta = static_cast<double>(ctx.dev.clk_comp_hz) /
            static_cast<double>(e.cycles);
  e.beta_bps = weight_bandwidth(l, cfg, ctx.dev.clk_comp_hz);
  e.repeat = op_is_weighted(l.op) ? repeat_count(l, cfg.frag.fragments) : 0;
  e.area = engine_area(l, cfg, ctx.calib, ctx.in_edges[idx]);
  // slowdown depends on the global bottleneck; refresh_totals fills it.
}

void refresh_totals(const DesignContext& ctx, DesignPoint& d) {
  DesignTotals t;
  t.cycles_max = 0;
  for (const auto& e : d.evals) t.cycles_max = std::max(t.cycles_max, e.cycles);
  t.theta_pipeline = static_cast<double>(ctx.dev.clk_comp_hz) /
                     static_cast<double>(t.cycles_max);
  for (auto& e : d.evals) {
    e.slowdown = Rational(BigInt(e.cycles), BigInt(t.cycles_max));
    t.area += e.area;
    t.stream_bps += e.slowdown * e.beta_bps;
  }
  t.io_bps = Rational(BigInt(ctx.dev.clk_comp_hz) *
                          (ctx.io_in_bits + ctx.io_out_bits),
                      BigInt(t.cycles_max));
  t.total_bps = t.io_bps + t.stream_bps;
  t.area_ok = t.area.lut <= ctx.dev.area.lut && t.area.ff <= ctx.dev.area.ff &&
              t.area.dsp <= ctx.dev.area.dsp &&
              t.area.bram36 <= ctx.dev.area.bram36;
  t.mem_ok = t.area.mem_bits <= ctx.dev.mem_budget_bits();
  t.bw_ok = t.total_bps <= Rational(BigInt(ctx.dev.bandwidth_bps));
  t.feasible = t.area_ok && t.mem_ok && t.bw_ok;
  d.totals = t;
}

DesignPoint evaluate(const DesignContext& ctx, std::vector<CEConfig> configs) {
  if (configs.size() != ctx.size())
    throw std::runtime_error("config count does not match layer count");
  DesignPoint d;
  d.configs = std::move(configs);
  d.evals.resize(ctx.size());
  for (std::size_t i = 0; i < ctx.size(); ++i) refresh_layer(ctx, d, i);
  refresh_totals(ctx, d);
  return d;
}

std::int64_t on_chip_weight_bits(const DesignContext& ctx,
                                 const DesignPoint& d, std::size_t idx) {
  const LayerSpec& l = ctx.layer(idx);
  if (!op_is_weighted(l.op)) return 0;
  WeightGeometry g = weight_geometry(l, d.configs[idx].unroll);
  return g.width_bits * d.configs[idx].frag.fragments *
         d.configs[idx].frag.on_depth;
}

std::int64_t off_chip_weight_bits(const DesignContext& ctx,
                                  const DesignPoint& d, std::size_t idx) {
  const LayerSpec& l = ctx.layer(idx);
  if (!op_is_weighted(l.op)) return 0;
  WeightGeometry g = weight_geometry(l, d.configs[idx].unroll);
  return g.width_bits * d.configs[idx].frag.fragments *
         d.configs[idx].frag.off_depth;
}

}  // namespace autows
