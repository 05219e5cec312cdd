#pragma once

#include <cstdint>
#include <vector>

#include "rmcpd/moments.hpp"
#include "rmcpd/pvalue.hpp"

namespace rmcpd {

struct PermutationOptions {
    int replicates = 10000;      // B
    std::uint64_t seed = 0;
    bool exhaustive = false;     // iterate all n! orderings (n <= 9)
    int threads = 0;             // 0 = hardware concurrency
};

// Null distributions of the per-channel scan maxima and of max M(t) under
// random (or exhaustive) individual orderings. Null statistics are sorted.
struct PermutationResult {
    std::int64_t replicates = 0;
    std::uint64_t seed = 0;
    bool exhaustive = false;
    int n0 = 0, n1 = 0;
    std::vector<double> null_max_combined;
    std::vector<double> null_max_out_w;
    std::vector<double> null_max_out_d;   // max |Z_out,d|
    std::vector<double> null_max_in;      // max |Z_in|
    std::vector<double> null_max_tilde;   // max |Z~_in|

    // (1 + #{null >= observed}) / (B + 1)
    double p_value(double observed, Channel channel = Channel::combined) const;
    // Empirical (1-alpha) quantile, type-7 linear interpolation.
    double critical_value(double alpha, Channel channel = Channel::combined) const;
};

// Recomputes the edge-count profile per ordering and standardizes with the
// ordering-invariant analytic moments. Deterministic given (seed, B);
// replicate r draws from an independent stream keyed by r, so the result is
// independent of the thread schedule.
PermutationResult permutation_test(const SimilarityGraph& g, const MomentContext& moments, int n0, int n1,
                                   const PermutationOptions& options);

}  // namespace rmcpd
