#pragma once

#include <cstdint>
#include <vector>

#include "rmcpd/graph.hpp"
#include "rmcpd/moments.hpp"

namespace rmcpd {

// Exact permutation-null moments obtained by iterating all n! orderings and
// recounting edges for each. Ground truth for the analytic formulas; capped
// at n <= 8 individuals. Sums run in 128-bit integers so results are exact.
struct ExactMoments {
    int n = 0;
    std::int64_t permutations = 0;
    std::vector<RawMoments> by_t;  // index t in 1..n-1, slot 0 unused

    const RawMoments& at(int t) const { return by_t.at(t); }
};

ExactMoments enumerate_null_moments(const SimilarityGraph& g, int max_order = 3);

// Convenience for a single split.
RawMoments enumerate_null_moments(const SimilarityGraph& g, int t, int max_order);

}  // namespace rmcpd
