#include "autows/network_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace autows {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

json parse_text(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(std::string(what) + ": malformed JSON");
  return j;
}

const json& require(const json& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) fail(ctx + ": missing field '" + key + "'");
  return *it;
}

std::int64_t require_int(const json& j, const char* key,
                         const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_number_integer()) fail(ctx + ": field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

double require_num(const json& j, const char* key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_number()) fail(ctx + ": field '" + key + "' must be a number");
  return v.get<double>();
}

OpKind parse_op(const std::string& s, const std::string& ctx) {
  if (s == "conv") return OpKind::Conv;
  if (s == "fc") return OpKind::FullyConnected;
  if (s == "pool") return OpKind::Pool;
  if (s == "eltwise_add") return OpKind::EltwiseAdd;
  if (s == "activation") return OpKind::Activation;
  fail(ctx + ": unknown op '" + s + "'");
}

}  // namespace

NetworkGraph parse_network_json(const std::string& text) {
  json j = parse_text(text, "network");
  NetworkGraph net;
  net.name = require(j, "name", "network").get<std::string>();
  const json& layers = require(j, "layers", "network");
  if (!layers.is_array() || layers.empty())
    fail("network: 'layers' must be a non-empty array");
  for (const json& lj : layers) {
    std::string ctx = "network layer";
    LayerSpec l;
    l.id = static_cast<int>(require_int(lj, "id", ctx));
    ctx = "layer " + std::to_string(l.id);
    l.op = parse_op(require(lj, "op", ctx).get<std::string>(), ctx);
    l.batch = require_int(lj, "b", ctx);
    l.channels = require_int(lj, "c", ctx);
    l.in_h = require_int(lj, "h", ctx);
    l.in_w = require_int(lj, "w", ctx);
    l.kernel = require_int(lj, "k", ctx);
    l.filters = require_int(lj, "f", ctx);
    l.stride = require_int(lj, "stride", ctx);
    l.pad = require_int(lj, "pad", ctx);
    // 0 marks "infer from the window rule" inside infer_and_validate.
    l.out_h = lj.contains("h_out") ? require_int(lj, "h_out", ctx) : 0;
    l.out_w = lj.contains("w_out") ? require_int(lj, "w_out", ctx) : 0;
    l.weight_bits = static_cast<int>(require_int(lj, "w_bits", ctx));
    l.act_bits = static_cast<int>(require_int(lj, "a_bits", ctx));
    net.layers.push_back(l);
  }
  if (j.contains("edges")) {
    const json& edges = j["edges"];
    if (!edges.is_array()) fail("network: 'edges' must be an array");
    for (const json& e : edges) {
      if (!e.is_array() || e.size() != 2)
        fail("network: each edge must be [src, dst]");
      net.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  }
  infer_and_validate(net);
  return net;
}

std::string serialize_network_json(const NetworkGraph& net) {
  json j;
  j["name"] = net.name;
  j["layers"] = json::array();
  for (const auto& l : net.layers) {
    json lj;
    lj["id"] = l.id;
    lj["op"] = op_kind_name(l.op);
    lj["b"] = l.batch;
    lj["c"] = l.channels;
    lj["h"] = l.in_h;
    lj["w"] = l.in_w;
    lj["k"] = l.kernel;
    lj["f"] = l.filters;
    lj["stride"] = l.stride;
    lj["pad"] = l.pad;
    lj["h_out"] = l.out_h;
    lj["w_out"] = l.out_w;
    lj["w_bits"] = l.weight_bits;
    lj["a_bits"] = l.act_bits;
    j["layers"].push_back(lj);
  }
  j["edges"] = json::array();
  for (const auto& [s, d] : net.edges) j["edges"].push_back({s, d});
  return j.dump(2) + "\n";
}

DeviceSpec parse_device_json(const std::string& text) {
  json j = parse_text(text, "device");
  DeviceSpec d;
  d.name = require(j, "name", "device").get<std::string>();
  std::string ctx = "device " + d.name;
  d.bandwidth_bps =
      static_cast<std::int64_t>(require_num(j, "bandwidth_gbps", ctx) * 1e9 + 0.5);
  d.clk_comp_hz =
      static_cast<std::int64_t>(require_num(j, "clk_comp_mhz", ctx) * 1e6 + 0.5);
  d.clk_dma_hz =
      static_cast<std::int64_t>(require_num(j, "clk_dma_mhz", ctx) * 1e6 + 0.5);
  const json& a = require(j, "area", ctx);
  d.area.lut = require_int(a, "lut", ctx);
  d.area.ff = require_int(a, "ff", ctx);
  d.area.dsp = require_int(a, "dsp", ctx);
  d.area.bram36 = require_int(a, "bram36", ctx);
  d.area.mem_bits = d.mem_budget_bits();
  d.validate();
  return d;
}

std::string serialize_device_json(const DeviceSpec& dev) {
  json j;
  j["name"] = dev.name;
  j["bandwidth_gbps"] = dev.bandwidth_bps / 1e9;
  j["clk_comp_mhz"] = dev.clk_comp_hz / 1e6;
  j["clk_dma_mhz"] = dev.clk_dma_hz / 1e6;
  j["area"] = {{"lut", dev.area.lut},
               {"ff", dev.area.ff},
               {"dsp", dev.area.dsp},
               {"bram36", dev.area.bram36}};
  return j.dump(2) + "\n";
}

CalibrationTable parse_calibration_json(const std::string& text) {
  json j = parse_text(text, "calibration");
  CalibrationTable c;
  if (j.contains("dsp_per_mac")) {
    for (const auto& [key, val] : j["dsp_per_mac"].items()) {
      // Keys look like "w4a5": weight bits then activation bits.
      int wb = 0, ab = 0;
      if (sscanf(key.c_str(), "w%da%d", &wb, &ab) != 2)
        fail("calibration: bad dsp_per_mac key '" + key + "'");
      c.dsp_per_mac_override[{wb, ab}] = val.get<double>();
    }
  }
  if (j.contains("lut_base")) c.lut_base = j["lut_base"].get<double>();
  if (j.contains("lut_per_mac")) c.lut_per_mac = j["lut_per_mac"].get<double>();
  if (j.contains("lut_per_port"))
    c.lut_per_port = j["lut_per_port"].get<double>();
  if (j.contains("fifo_words_per_edge"))
    c.fifo_words_per_edge = j["fifo_words_per_edge"].get<std::int64_t>();
  if (j.contains("bram_depth_cap"))
    c.bram_depth_cap = j["bram_depth_cap"].get<std::int64_t>();
  if (c.fifo_words_per_edge < 0 || c.bram_depth_cap < 1)
    fail("calibration: depth fields must be positive");
  return c;
}

std::string serialize_calibration_json(const CalibrationTable& calib) {
  json j;
  json dpm = json::object();
  for (const auto& [key, val] : calib.dsp_per_mac_override) {
    std::string name =
        "w" + std::to_string(key.first) + "a" + std::to_string(key.second);
    dpm[name] = val;
  }
  j["dsp_per_mac"] = dpm;
  j["lut_base"] = calib.lut_base;
  j["lut_per_mac"] = calib.lut_per_mac;
  j["lut_per_port"] = calib.lut_per_port;
  j["fifo_words_per_edge"] = calib.fifo_words_per_edge;
  j["bram_depth_cap"] = calib.bram_depth_cap;
  return j.dump(2) + "\n";
}

DeviceSpec load_device(const std::string& name_or_path) {
  if (const DeviceSpec* preset = find_preset(name_or_path)) return *preset;
  if (std::filesystem::exists(name_or_path))
    return parse_device_json(read_text_file(name_or_path));
  fail("device '" + name_or_path + "' is neither a preset nor a file");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write " + path);
  out << text;
}

}  // namespace autows
