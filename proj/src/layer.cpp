#include "autows/layer.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace autows {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::string lid(const LayerSpec& l) { return "layer " + std::to_string(l.id); }

}  // namespace

const char* op_kind_name(OpKind op) {
  switch (op) {
    case OpKind::Conv: return "conv";
    case OpKind::FullyConnected: return "fc";
    case OpKind::Pool: return "pool";
    case OpKind::EltwiseAdd: return "eltwise_add";
    case OpKind::Activation: return "activation";
  }
  return "?";
}

bool op_is_weighted(OpKind op) {
  return op == OpKind::Conv || op == OpKind::FullyConnected;
}

bool op_is_windowed(OpKind op) {
  return op == OpKind::Conv || op == OpKind::Pool;
}

std::int64_t window_out_dim(std::int64_t in, std::int64_t kernel,
                            std::int64_t stride, std::int64_t pad) {
  std::int64_t span = in + 2 * pad - kernel;
  if (span < 0) fail("window does not fit: in=" + std::to_string(in) +
                     " kernel=" + std::to_string(kernel));
  return span / stride + 1;
}

const LayerSpec& NetworkGraph::layer(int id) const {
  for (const auto& l : layers)
    if (l.id == id) return l;
  fail("unknown layer id " + std::to_string(id));
}

std::vector<int> NetworkGraph::producers_of(int id) const {
  std::vector<int> out;
  for (const auto& [s, d] : edges)
    if (d == id) out.push_back(s);
  return out;
}

std::vector<int> NetworkGraph::consumers_of(int id) const {
  std::vector<int> out;
  for (const auto& [s, d] : edges)
    if (s == id) out.push_back(d);
  return out;
}

int NetworkGraph::source_id() const {
  for (const auto& l : layers)
    if (producers_of(l.id).empty()) return l.id;
  fail("network has no source");
}

int NetworkGraph::sink_id() const {
  for (const auto& l : layers)
    if (consumers_of(l.id).empty()) return l.id;
  fail("network has no sink");
}

namespace {

void validate_layer(LayerSpec& l) {
  auto positive = [&](std::int64_t v, const char* name) {
    if (v < 1) fail(lid(l) + ": " + name + " must be >= 1");
  };
  positive(l.batch, "b");
  positive(l.channels, "c");
  positive(l.in_h, "h");
  positive(l.in_w, "w");
  positive(l.kernel, "k");
  positive(l.filters, "f");
  positive(l.stride, "stride");
  if (l.pad < 0) fail(lid(l) + ": pad must be >= 0");
  if (l.weight_bits < 1 || l.weight_bits > 32)
    fail(lid(l) + ": w_bits must be in [1, 32]");
  if (l.act_bits < 1 || l.act_bits > 32)
    fail(lid(l) + ": a_bits must be in [1, 32]");

  switch (l.op) {
    case OpKind::FullyConnected:
      if (l.kernel != 1 || l.in_h != 1 || l.in_w != 1)
        fail(lid(l) + ": fc requires k = h = w = 1");
      l.out_h = 1;
      l.out_w = 1;
      break;
    case OpKind::EltwiseAdd:
    case OpKind::Activation:
      if (l.kernel != 1) fail(lid(l) + ": " + op_kind_name(l.op) +
                              " requires k = 1");
      if (l.filters != l.channels)
        fail(lid(l) + ": " + op_kind_name(l.op) + " requires f == c");
      l.out_h = l.in_h;
      l.out_w = l.in_w;
      break;
    case OpKind::Pool:
      if (l.filters != l.channels) fail(lid(l) + ": pool requires f == c");
      [[fallthrough]];
    case OpKind::Conv: {
      std::int64_t oh = window_out_dim(l.in_h, l.kernel, l.stride, l.pad);
      std::int64_t ow = window_out_dim(l.in_w, l.kernel, l.stride, l.pad);
      // Explicit output dims, when present (> 0 sentinel handled by parser),
      // must agree with the window rule.
      if (l.out_h == 0) l.out_h = oh;
      if (l.out_w == 0) l.out_w = ow;
      if (l.out_h != oh || l.out_w != ow)
        fail(lid(l) + ": declared output dims " + std::to_string(l.out_h) +
             "x" + std::to_string(l.out_w) + " contradict window rule " +
             std::to_string(oh) + "x" + std::to_string(ow));
      break;
    }
  }
}

}  // namespace

void infer_and_validate(NetworkGraph& net) {
  if (net.layers.empty()) fail("network has no layers");

  std::sort(net.layers.begin(), net.layers.end(),
            [](const LayerSpec& a, const LayerSpec& b) { return a.id < b.id; });
  std::set<int> ids;
  for (auto& l : net.layers) {
    if (!ids.insert(l.id).second)
      fail("duplicate layer id " + std::to_string(l.id));
    validate_layer(l);
  }

  std::int64_t batch = net.layers.front().batch;
  for (const auto& l : net.layers)
    if (l.batch != batch) fail(lid(l) + ": batch differs across pipeline");

  for (const auto& [s, d] : net.edges) {
    if (!ids.count(s) || !ids.count(d))
      fail("edge references unknown layer id");
    // Forward edges only: ids are pipeline positions, so this both fixes the
    // topological order and rules out cycles.
    if (s >= d) fail("edge " + std::to_string(s) + "->" + std::to_string(d) +
                     " must point forward in the pipeline");
    const LayerSpec& p = net.layer(s);
    const LayerSpec& c = net.layer(d);
    std::int64_t produced = p.filters * p.out_h * p.out_w;
    std::int64_t consumed = c.channels * c.in_h * c.in_w;
    if (produced != consumed)
      fail("edge " + std::to_string(s) + "->" + std::to_string(d) +
           ": producer volume " + std::to_string(produced) +
           " != consumer volume " + std::to_string(consumed));
  }

  int sources = 0, sinks = 0;
  for (const auto& l : net.layers) {
    auto prods = net.producers_of(l.id);
    auto cons = net.consumers_of(l.id);
    if (prods.empty()) ++sources;
    if (cons.empty()) ++sinks;
    if (l.op == OpKind::EltwiseAdd) {
      if (prods.size() != 2)
        fail(lid(l) +
             ": eltwise_add requires exactly two producers");
      const LayerSpec& a = net.layer(prods[0]);
      const LayerSpec& b = net.layer(prods[1]);
      if (a.filters != b.filters || a.out_h != b.out_h || a.out_w != b.out_w)
        fail(lid(l) +
             ": eltwise_add producers have mismatched shapes");
    } else if (prods.size() > 1) {
      fail(lid(l) + ": multiple producers only " +
           "allowed for eltwise_add");
    }
  }
  if (net.layers.size() > 1 && net.edges.empty())
    fail("multi-layer network has no edges");
  if (sources != 1) fail("network must have exactly one source");
  if (sinks != 1) fail("network must have exactly one sink");
}

}  // namespace autows
