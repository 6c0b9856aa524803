#pragma once

#include <cstdint>

#include "autows/design_point.hpp"
#include "autows/dse.hpp"

namespace autows {

/// Bounds that keep the exact search tractable.
struct OracleCaps {
  std::int64_t max_points = 10'000'000;  // refuse larger candidate products
  std::int64_t max_fragments = 16;       // per-layer fragment ceiling
};

struct OracleResult {
  bool found = false;        // some candidate met every constraint
  DesignPoint best;          // meaningful only when found
  std::int64_t space = 0;    // full candidate-product size
  std::int64_t visited = 0;  // leaves reached after pruning
};

/// Exact search over the same quantized space the greedy walks: divisor
/// unrolls per layer, streamed depth on the evict_step grid plus the fully
/// streamed point, fragment counts 1..min(off_words, max_fragments).
/// Maximizes pipeline throughput; ties prefer smaller area, then lower
/// bandwidth, then the earliest candidate ordering. Throws when the space
/// exceeds caps.max_points.
OracleResult exhaustive_search(const DesignContext& ctx,
                               const DseHyperParams& hp,
                               const OracleCaps& caps);

}  // namespace autows
