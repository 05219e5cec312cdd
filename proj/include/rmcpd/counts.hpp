#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rmcpd/graph.hpp"

namespace rmcpd {

// Edge counts for every candidate split t in 1..n-1:
//   r_out1[t] / r_in1[t]: between / within edges with both endpoints at
//   positions <= t; r_out2[t]: between edges with both endpoints > t.
// Arrays are sized n and indexed directly by t (slot 0 unused).
struct EdgeCountProfile {
    int n = 0;
    std::int64_t g_out = 0;
    std::int64_t g_in = 0;
    std::vector<std::int64_t> r_out1, r_out2, r_in1;
};

// `position[u]` is individual u's time slot in 1..n and must be a
// permutation. Computed from the D pairs with difference arrays,
// O(|pairs| + n) per call.
EdgeCountProfile edge_count_profile(const SimilarityGraph& g, std::span<const int> position);

// Observed ordering (individual u at position u+1).
EdgeCountProfile edge_count_profile(const SimilarityGraph& g);

}  // namespace rmcpd
