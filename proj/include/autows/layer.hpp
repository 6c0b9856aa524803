#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace autows {

enum class OpKind { Conv, FullyConnected, Pool, EltwiseAdd, Activation };

const char* op_kind_name(OpKind op);
bool op_is_weighted(OpKind op);   // Conv and FullyConnected carry weights
bool op_is_windowed(OpKind op);   // Conv and Pool slide a k x k window

/// One pipeline stage, mapped 1:1 onto a compute engine.
/// Dimensions follow the usual conv layout: the stage consumes a
/// channels x in_h x in_w activation block per batch element and produces
/// filters x out_h x out_w. FullyConnected is the degenerate case
/// kernel = in_h = in_w = 1; Pool/EltwiseAdd/Activation carry no weights and
/// keep filters == channels.
struct LayerSpec {
  int id = 0;
  OpKind op = OpKind::Conv;
  std::int64_t batch = 1;
  std::int64_t channels = 1;
  std::int64_t in_h = 1;
  std::int64_t in_w = 1;
  std::int64_t kernel = 1;
  std::int64_t filters = 1;
  std::int64_t out_h = 1;
  std::int64_t out_w = 1;
  std::int64_t stride = 1;
  std::int64_t pad = 0;
  int weight_bits = 8;  // ignored for unweighted ops
  int act_bits = 8;

  bool operator==(const LayerSpec& o) const = default;
};

/// Sliding-window output size: floor((in + 2*pad - kernel) / stride) + 1.
std::int64_t window_out_dim(std::int64_t in, std::int64_t kernel,
                            std::int64_t stride, std::int64_t pad);

/// Pipeline DAG. Layer ids give the pipeline order; every edge must point
/// forward (src id precedes dst id), the graph has exactly one source and one
/// sink, and each edge's producer volume (filters*out_h*out_w) matches the
/// consumer volume (channels*in_h*in_w). EltwiseAdd joins exactly two
/// identically shaped producers.
struct NetworkGraph {
  std::string name;
  std::vector<LayerSpec> layers;                // sorted by id
  std::vector<std::pair<int, int>> edges;       // (src id, dst id)

  const LayerSpec& layer(int id) const;
  std::vector<int> producers_of(int id) const;
  std::vector<int> consumers_of(int id) const;
  int source_id() const;
  int sink_id() const;

  bool operator==(const NetworkGraph& o) const = default;
};

/// Fills missing out_h/out_w from the window rule and normalizes degenerate
/// dims, then checks all graph invariants. Throws std::runtime_error with a
/// descriptive message on violation.
void infer_and_validate(NetworkGraph& net);

}  // namespace autows
