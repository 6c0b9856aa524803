#include "autows/ce_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace autows {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

void UnrollFactors::validate(const LayerSpec& l) const {
  if (kernel_par < 1 || channel_par < 1 || filter_par < 1)
    fail("unroll factors must be >= 1");
  if (l.kernel % kernel_par || l.channels % channel_par ||
      l.filters % filter_par)
    fail("unroll factors must divide layer dimensions (layer " +
         std::to_string(l.id) + ")");
}

WeightGeometry weight_geometry(const LayerSpec& l, const UnrollFactors& u) {
  if (!op_is_weighted(l.op))
    fail("layer " + std::to_string(l.id) + " (" + op_kind_name(l.op) +
         ") has no weight memory");
  u.validate(l);
  WeightGeometry g;
  g.depth_words = u.filter_trip(l) * u.channel_trip(l) * u.kernel_trip(l);
  g.width_bits = u.filter_par * u.channel_par * u.kernel_par * u.kernel_par *
                 l.weight_bits;
  return g;
}

Fragmentation fragment_geometry(std::int64_t depth_words,
                                std::int64_t off_words,
                                std::int64_t fragments) {
  if (depth_words < 1) fail("fragment_geometry: empty weight memory");
  if (off_words < 0 || off_words > depth_words)
    fail("fragment_geometry: off_words out of range");
  if (fragments < 1) fail("fragment_geometry: fragments must be >= 1");
  if (off_words == 0 && fragments != 1)
    fail("fragment_geometry: an unstreamed memory has a single fragment");
  if (off_words > 0 && fragments > off_words)
    fail("fragment_geometry: more fragments than streamed words");
  Fragmentation f;
  f.fragments = fragments;
  f.off_depth = off_words == 0 ? 0 : ceil_div(off_words, fragments);
  f.on_depth = ceil_div(depth_words - off_words, fragments);
  return f;
}

std::int64_t repeat_count(const LayerSpec& l, std::int64_t fragments) {
  return l.batch * l.out_h * l.out_w * fragments;
}

std::int64_t inference_cycles(const LayerSpec& l, const UnrollFactors& u) {
  u.validate(l);
  switch (l.op) {
    case OpKind::Conv:
      return l.batch * l.out_h * l.out_w * u.kernel_trip(l) *
             u.channel_trip(l) * u.filter_trip(l);
    case OpKind::FullyConnected:
      return l.batch * u.channel_trip(l) * u.filter_trip(l);
    case OpKind::Pool:
      return l.batch * l.out_h * l.out_w * u.kernel_trip(l) * u.channel_trip(l);
    case OpKind::EltwiseAdd:
    case OpKind::Activation:
      return l.batch * l.in_h * l.in_w * u.channel_trip(l);
  }
  fail("unreachable op kind");
}

double throughput(const LayerSpec& l, const UnrollFactors& u,
                  std::int64_t clk_comp_hz) {
  return static_cast<double>(clk_comp_hz) /
         static_cast<double>(inference_cycles(l, u));
}

Rational weight_bandwidth(const LayerSpec& l, const CEConfig& cfg,
                          std::int64_t clk_comp_hz) {
  if (!op_is_weighted(l.op)) return Rational(0);
  std::int64_t total = cfg.frag.on_depth + cfg.frag.off_depth;
  if (total == 0)
    fail("layer " + std::to_string(l.id) + ": weighted engine with empty memory");
  if (cfg.frag.off_depth == 0) return Rational(0);
  WeightGeometry g = weight_geometry(l, cfg.unroll);
  return Rational(BigInt(g.width_bits) * clk_comp_hz * cfg.frag.off_depth,
                  BigInt(total));
}

BramBreakdown engine_bram_breakdown(const LayerSpec& l, const CEConfig& cfg,
                                    const CalibrationTable& calib,
                                    int in_edges) {
  BramBreakdown b;
  if (op_is_weighted(l.op)) {
    WeightGeometry g = weight_geometry(l, cfg.unroll);
    b.weight_static = bram_blocks(
        calib, cfg.frag.fragments * cfg.frag.on_depth, g.width_bits);
    if (cfg.frag.off_depth > 0)
      b.weight_buffer = bram_blocks(calib, cfg.frag.off_depth, g.width_bits);
  }
  // Inter-engine FIFOs plus the (kernel-1)-row line buffer for windowed ops.
  std::int64_t fifo_words = calib.fifo_words_per_edge;
  if (fifo_words > 0)
    b.act_fifo += in_edges * bram_blocks(calib, fifo_words, l.act_bits);
  if (op_is_windowed(l.op) && l.kernel > 1)
    b.act_fifo +=
        bram_blocks(calib, (l.kernel - 1) * l.in_w * l.channels, l.act_bits);
  return b;
}

ResourceVector engine_area(const LayerSpec& l, const CEConfig& cfg,
                           const CalibrationTable& calib, int in_edges) {
  ResourceVector a;
  std::int64_t lanes = 0;
  if (op_is_weighted(l.op)) {
    WeightGeometry g = weight_geometry(l, cfg.unroll);
    lanes = cfg.unroll.mac_lanes();
    a.dsp = static_cast<std::int64_t>(
        std::ceil(lanes * calib.dsp_per_mac(l.weight_bits, l.act_bits)));
    a.mem_bits =
        g.width_bits * (cfg.frag.fragments * cfg.frag.on_depth +
                        cfg.frag.off_depth);
  } else if (l.op == OpKind::Pool) {
    lanes = cfg.unroll.channel_par * cfg.unroll.kernel_par *
            cfg.unroll.kernel_par;
  } else {
    lanes = cfg.unroll.channel_par;
  }
  BramBreakdown b = engine_bram_breakdown(l, cfg, calib, in_edges);
  a.bram36 = b.weight_static + b.weight_buffer + b.act_fifo;
  std::int64_t ports = op_is_weighted(l.op) ? cfg.frag.fragments : 0;
  a.lut = static_cast<std::int64_t>(
      std::ceil(calib.lut_base + calib.lut_per_mac * lanes +
                calib.lut_per_port * ports));
  a.ff = a.lut;  // register budget tracks the LUT estimate 1:1
  return a;
}

}  // namespace autows
