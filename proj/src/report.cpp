#include "autows/report.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "autows/network_io.hpp"

namespace autows {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::string g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

json require(const json& j, const char* key, const char* what) {
  if (!j.contains(key))
    fail(std::string(what) + ": missing field '" + key + "'");
  return j.at(key);
}

bool close_enough(double a, double b) {
  double scale = std::max({std::fabs(a), std::fabs(b), 1e-30});
  return std::fabs(a - b) <= 1e-9 * scale;
}

}  // namespace

std::string serialize_design_json(const DesignContext& ctx,
                                  const DesignPoint& d,
                                  const DseHyperParams& hp, bool memory_ok) {
  json doc;
  doc["schema"] = "autows-design-v1";
  doc["network"] = json::parse(serialize_network_json(ctx.net));
  doc["device"] = json::parse(serialize_device_json(ctx.dev));
  doc["calibration"] = json::parse(serialize_calibration_json(ctx.calib));
  doc["hyperparameters"] = {{"unroll_step", hp.unroll_step},
                            {"evict_step", hp.evict_step},
                            {"evict_enabled", hp.evict_enabled}};
  doc["memory_ok"] = memory_ok;

  json layers = json::array();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const LayerSpec& l = ctx.layer(i);
    const CEConfig& cfg = d.configs[i];
    const LayerEval& ev = d.evals[i];
    json e;
    e["id"] = l.id;
    e["op"] = op_kind_name(l.op);
    e["unroll"] = {{"kernel_par", cfg.unroll.kernel_par},
                   {"channel_par", cfg.unroll.channel_par},
                   {"filter_par", cfg.unroll.filter_par}};
    e["frag"] = {{"fragments", cfg.frag.fragments},
                 {"on_depth", cfg.frag.on_depth},
                 {"off_depth", cfg.frag.off_depth}};
    e["off_words"] = cfg.off_words;
    e["cycles"] = ev.cycles;
    e["theta"] = ev.theta;
    e["slowdown"] = to_double(ev.slowdown);
    e["beta_bps"] = to_double(ev.beta_bps);
    e["repeat"] = ev.repeat;
    e["area"] = {{"lut", ev.area.lut},
                 {"ff", ev.area.ff},
                 {"dsp", ev.area.dsp},
                 {"bram36", ev.area.bram36},
                 {"mem_bits", ev.area.mem_bits}};
    e["on_chip_weight_bytes"] = on_chip_weight_bits(ctx, d, i) / 8.0;
    e["off_chip_weight_bytes"] = off_chip_weight_bits(ctx, d, i) / 8.0;
    if (op_is_weighted(l.op) &&
        cfg.off_words < weight_geometry(l, cfg.unroll).depth_words) {
      e["delta_b_bps"] = to_double(delta_bandwidth(ctx, d, i, hp));
    } else {
      e["delta_b_bps"] = nullptr;
    }
    layers.push_back(std::move(e));
  }
  doc["layers"] = std::move(layers);

  doc["totals"] = {
      {"cycles_max", d.totals.cycles_max},
      {"theta_pipeline", d.totals.theta_pipeline},
      {"fps", d.totals.theta_pipeline},
      {"io_bps", to_double(d.totals.io_bps)},
      {"stream_bps", to_double(d.totals.stream_bps)},
      {"total_bps", to_double(d.totals.total_bps)},
      {"area",
       {{"lut", d.totals.area.lut},
        {"ff", d.totals.area.ff},
        {"dsp", d.totals.area.dsp},
        {"bram36", d.totals.area.bram36},
        {"mem_bits", d.totals.area.mem_bits}}},
      {"area_ok", d.totals.area_ok},
      {"mem_ok", d.totals.mem_ok},
      {"bw_ok", d.totals.bw_ok},
      {"feasible", d.totals.feasible}};
  return doc.dump(2) + "\n";
}

DesignBundle parse_design_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) fail("design file: malformed JSON");
  if (require(doc, "schema", "design file") != "autows-design-v1")
    fail("design file: unsupported schema");

  DesignBundle b;
  b.net = parse_network_json(require(doc, "network", "design file").dump());
  b.dev = parse_device_json(require(doc, "device", "design file").dump());
  b.calib =
      parse_calibration_json(require(doc, "calibration", "design file").dump());
  json hp = require(doc, "hyperparameters", "design file");
  b.hp.unroll_step = require(hp, "unroll_step", "hyperparameters");
  b.hp.evict_step = require(hp, "evict_step", "hyperparameters");
  b.hp.evict_enabled = require(hp, "evict_enabled", "hyperparameters");
  b.hp.validate();
  b.memory_ok = require(doc, "memory_ok", "design file");

  json layers = require(doc, "layers", "design file");
  if (!layers.is_array() || layers.size() != b.net.layers.size())
    fail("design file: layer list does not match the network");
  b.configs.resize(layers.size());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const json& e = layers[i];
    if (static_cast<int>(require(e, "id", "design layer")) !=
        b.net.layers[i].id)
      fail("design file: layer ids out of order");
    json u = require(e, "unroll", "design layer");
    json f = require(e, "frag", "design layer");
    CEConfig& cfg = b.configs[i];
    cfg.unroll.kernel_par = require(u, "kernel_par", "unroll");
    cfg.unroll.channel_par = require(u, "channel_par", "unroll");
    cfg.unroll.filter_par = require(u, "filter_par", "unroll");
    cfg.frag.fragments = require(f, "fragments", "frag");
    cfg.frag.on_depth = require(f, "on_depth", "frag");
    cfg.frag.off_depth = require(f, "off_depth", "frag");
    cfg.off_words = require(e, "off_words", "design layer");
  }

  // Re-derive everything and hold the file to it.
  DesignContext ctx = DesignContext::make(b.net, b.dev, b.calib);
  DesignPoint d = evaluate(ctx, b.configs);
  json totals = require(doc, "totals", "design file");
  b.feasible = require(totals, "feasible", "totals");
  if (b.feasible != d.totals.feasible ||
      static_cast<std::int64_t>(require(totals, "cycles_max", "totals")) !=
          d.totals.cycles_max ||
      !close_enough(require(totals, "theta_pipeline", "totals"),
                    d.totals.theta_pipeline) ||
      !close_enough(require(totals, "total_bps", "totals"),
                    to_double(d.totals.total_bps)))
    fail("design file: stored summary disagrees with re-evaluation");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const json& e = layers[i];
    json a = require(e, "area", "design layer");
    ResourceVector stored{a.at("lut"), a.at("ff"), a.at("dsp"), a.at("bram36"),
                          a.at("mem_bits")};
    if (!(stored == d.evals[i].area) ||
        static_cast<std::int64_t>(require(e, "cycles", "design layer")) !=
            d.evals[i].cycles ||
        static_cast<std::int64_t>(require(e, "repeat", "design layer")) !=
            d.evals[i].repeat)
      fail("design file: stored layer metrics disagree with re-evaluation");
  }
  return b;
}

std::string render_breakdown_csv(const DesignContext& ctx,
                                 const DesignPoint& d) {
  BramBreakdown bram;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    BramBreakdown b = engine_bram_breakdown(ctx.layer(i), d.configs[i],
                                            ctx.calib, ctx.in_edges[i]);
    bram.weight_static += b.weight_static;
    bram.weight_buffer += b.weight_buffer;
    bram.act_fifo += b.act_fifo;
  }
  auto blocks_to_mb = [](std::int64_t blocks) {
    return static_cast<double>(blocks) * kBram36Bits / 8e6;
  };
  double bw_act = to_double(d.totals.io_bps) / 1e9;
  double bw_wt = to_double(d.totals.stream_bps) / 1e9;
  double bw_total = to_double(d.totals.total_bps) / 1e9;
  double bw_cap = static_cast<double>(ctx.dev.bandwidth_bps) / 1e9;
  std::int64_t bram_total =
      bram.weight_static + bram.weight_buffer + bram.act_fifo;

  std::ostringstream out;
  out << "metric,value,unit\n";
  out << "fps," << g6(d.totals.theta_pipeline) << ",inf/s\n";
  out << "latency," << g6(to_double(first_inference_latency(ctx, d)) * 1e3)
      << ",ms\n";
  out << "bw_act," << g6(bw_act) << ",Gbps\n";
  out << "bw_weight," << g6(bw_wt) << ",Gbps\n";
  out << "bw_total," << g6(bw_total) << ",Gbps\n";
  out << "bw_utilization," << g6(100.0 * bw_total / bw_cap) << ",%\n";
  out << "bram_act_fifo," << g6(blocks_to_mb(bram.act_fifo)) << ",MB\n";
  out << "bram_weight_buffer," << g6(blocks_to_mb(bram.weight_buffer))
      << ",MB\n";
  out << "bram_weight_static," << g6(blocks_to_mb(bram.weight_static))
      << ",MB\n";
  out << "bram_total," << g6(blocks_to_mb(bram_total)) << ",MB\n";
  out << "bram_utilization,"
      << g6(100.0 * static_cast<double>(bram_total) /
            static_cast<double>(ctx.dev.area.bram36))
      << ",%\n";
  out << "dsp," << g6(static_cast<double>(d.totals.area.dsp)) << ",units\n";
  out << "dsp_utilization,"
      << g6(100.0 * static_cast<double>(d.totals.area.dsp) /
            static_cast<double>(ctx.dev.area.dsp))
      << ",%\n";
  out << "lut," << g6(static_cast<double>(d.totals.area.lut)) << ",units\n";
  out << "ff," << g6(static_cast<double>(d.totals.area.ff)) << ",units\n";
  return out.str();
}

std::string render_trace_jsonl(const std::vector<TraceEntry>& trace) {
  std::ostringstream out;
  for (const TraceEntry& t : trace) {
    json e = {{"iteration", t.iteration},
              {"action", trace_action_name(t.action)},
              {"layer", t.layer_id},
              {"theta_pipeline", t.theta_pipeline},
              {"total_bw_bps", t.total_bw_bps},
              {"mem_bits", t.total_mem_bits},
              {"feasible", t.feasible},
              {"burst_imbalance", t.burst_imbalance}};
    out << e.dump() << "\n";
  }
  return out.str();
}

std::string serialize_sim_report_json(const DesignContext& ctx,
                                      const DesignPoint& d,
                                      const SimReport& rep) {
  DeviationSummary dev = compare_with_model(ctx, d, rep);
  json doc;
  doc["schema"] = "autows-simreport-v1";
  doc["horizon"] = rep.horizon;
  doc["any_streaming"] = rep.any_streaming;
  doc["model_bw_feasible"] = rep.model_bw_feasible;
  doc["theta_pipeline"] = rep.theta_pipeline;
  doc["achieved_theta"] = to_double(rep.achieved_theta);
  doc["theta_ratio"] = dev.theta_ratio;
  doc["dma_utilization"] = to_double(rep.dma_utilization);
  doc["max_rel_error"] = dev.max_rel_error;

  json layers = json::array();
  std::size_t di = 0;
  for (const LayerSimStats& st : rep.layers) {
    json e;
    e["layer"] = st.layer_id;
    e["streaming"] = st.streaming;
    e["bursts"] = st.bursts;
    e["stall_time_s"] = to_double(st.stall_time);
    e["stall_events"] = st.stall_events;
    e["measured_beta_bps"] = to_double(st.measured_beta_bps);
    e["offset_s"] = to_double(st.offset);
    if (st.streaming) {
      const DeviationEntry& de = dev.layers.at(di++);
      e["model_beta_bps"] = de.model_beta_bps;
      e["rel_error"] = de.rel_error;
    } else {
      e["model_beta_bps"] = 0.0;
      e["rel_error"] = 0.0;
    }
    layers.push_back(std::move(e));
  }
  doc["layers"] = std::move(layers);
  return doc.dump(2) + "\n";
}

std::string render_events_jsonl(const SimReport& rep) {
  std::ostringstream out;
  for (const SimEvent& ev : rep.events) {
    json e = {{"t", to_double(ev.t)},
              {"kind", sim_event_kind_name(ev.kind)},
              {"layer", ev.layer_id},
              {"fragment", ev.fragment}};
    out << e.dump() << "\n";
  }
  return out.str();
}

DeviceSpec scale_device(const DeviceSpec& base, SweepParam param,
                        double fraction) {
  if (fraction <= 0) fail("sweep fractions must be positive");
  DeviceSpec dev = base;
  if (param == SweepParam::MemBudget) {
    dev.area.bram36 = static_cast<std::int64_t>(
        std::llround(fraction * static_cast<double>(base.area.bram36)));
    dev.area.mem_bits = dev.area.bram36 * kBram36Bits;
  } else {
    dev.bandwidth_bps = static_cast<std::int64_t>(
        std::llround(fraction * static_cast<double>(base.bandwidth_bps)));
  }
  dev.name = base.name + "-scaled";
  return dev;
}

std::vector<SweepPoint> run_sweep(const NetworkGraph& net,
                                  const DeviceSpec& dev,
                                  const CalibrationTable& calib,
                                  SweepParam param,
                                  const std::vector<double>& fractions,
                                  const DseHyperParams& hp) {
  if (fractions.empty()) fail("sweep needs at least one fraction");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (fractions[i] <= 0) fail("sweep fractions must be positive");
    if (i > 0 && fractions[i] <= fractions[i - 1])
      fail("sweep fractions must be strictly increasing");
  }

  auto one_point = [&](double frac) {
    DeviceSpec scaled = scale_device(dev, param, frac);
    DesignContext ctx = DesignContext::make(net, scaled, calib);
    SweepPoint p;
    p.fraction = frac;

    DseResult ws = run_dse(ctx, hp);
    p.ws_feasible = ws.memory_ok && ws.design.totals.feasible;
    p.ws_fps = ws.design.totals.theta_pipeline;
    p.ws_stream_norm = to_double(ws.design.totals.stream_bps) /
                       static_cast<double>(scaled.bandwidth_bps);

    DseHyperParams vhp = hp;
    vhp.evict_enabled = false;
    DseResult vanilla = run_dse(ctx, vhp);
    p.vanilla_feasible =
        vanilla.memory_ok && vanilla.design.totals.feasible;
    p.vanilla_fps = vanilla.design.totals.theta_pipeline;
    return p;
  };

  std::vector<std::future<SweepPoint>> jobs;
  jobs.reserve(fractions.size());
  for (double f : fractions)
    jobs.push_back(std::async(std::launch::async, one_point, f));
  std::vector<SweepPoint> rows;
  rows.reserve(fractions.size());
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

std::string render_sweep_csv(SweepParam param,
                             const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  const char* axis =
      param == SweepParam::MemBudget ? "a_mem_norm" : "bandwidth_frac";
  out << axis << ",fps_autows,fps_vanilla,bw_norm\n";
  for (const SweepPoint& p : points) {
    out << g6(p.fraction) << ",";
    if (p.ws_feasible)
      out << g6(p.ws_fps);
    else
      out << "infeasible";
    out << ",";
    if (p.vanilla_feasible)
      out << g6(p.vanilla_fps);
    else
      out << "infeasible";
    out << "," << g6(p.ws_stream_norm) << "\n";
  }
  return out.str();
}

}  // namespace autows
