#include "rmcpd/counts.hpp"

#include <algorithm>
#include <numeric>

#include "rmcpd/errors.hpp"

namespace rmcpd {

EdgeCountProfile edge_count_profile(const SimilarityGraph& g, std::span<const int> position) {
    const int n = g.n;
    if (static_cast<int>(position.size()) != n) throw config_error("ordering must assign a position to every individual");
    {
        std::vector<char> seen(n + 1, 0);
        for (int p : position) {
            if (p < 1 || p > n || seen[p]) throw config_error("ordering is not a permutation of 1..n");
            seen[p] = 1;
        }
    }

    EdgeCountProfile prof;
    prof.n = n;
    prof.g_out = g.g_out;
    prof.g_in = g.g_in;
    prof.r_out1.assign(n + 1, 0);
    prof.r_out2.assign(n + 1, 0);
    prof.r_in1.assign(n + 1, 0);

    for (const DPair& p : g.out_pairs) {
        const int a = position[p.u], b = position[p.v];
        const int lo = std::min(a, b), hi = std::max(a, b);
        if (hi <= n - 1) prof.r_out1[hi] += p.count;  // counted for all t >= hi
        if (lo >= 2) {                                 // counted for all t <= lo-1
            prof.r_out2[1] += p.count;
            prof.r_out2[lo] -= p.count;
        }
    }
    for (int u = 0; u < n; ++u)
        if (g.d_diag[u] != 0 && position[u] <= n - 1) prof.r_in1[position[u]] += g.d_diag[u];

    for (int t = 2; t <= n - 1; ++t) {
        prof.r_out1[t] += prof.r_out1[t - 1];
        prof.r_out2[t] += prof.r_out2[t - 1];
        prof.r_in1[t] += prof.r_in1[t - 1];
    }
    prof.r_out1.resize(n);
    prof.r_out2.resize(n);
    prof.r_in1.resize(n);
    return prof;
}

EdgeCountProfile edge_count_profile(const SimilarityGraph& g) {
    std::vector<int> position(g.n);
    std::iota(position.begin(), position.end(), 1);
    return edge_count_profile(g, position);
}

}  // namespace rmcpd
