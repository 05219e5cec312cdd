#include "rmcpd/enumeration.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "rmcpd/counts.hpp"
#include "rmcpd/errors.hpp"

namespace rmcpd {

namespace {
constexpr int kMaxN = 8;  // 8! = 40320 orderings
}

ExactMoments enumerate_null_moments(const SimilarityGraph& g, int max_order) {
    const int n = g.n;
    if (n > kMaxN)
        throw config_error("exhaustive enumeration is limited to n <= " + std::to_string(kMaxN) +
                           " individuals (got n=" + std::to_string(n) + ")");
    if (n < 2) throw config_error("enumeration requires n >= 2");
    if (max_order < 1 || max_order > 3) throw config_error("max_order must be 1, 2, or 3");

    // 19 accumulators per t, in the field order of RawMoments.
    constexpr int kKeys = 19;
    std::vector<std::array<__int128, kKeys>> acc(n);
    for (auto& row : acc) row.fill(0);

    std::vector<int> position(n);
    std::iota(position.begin(), position.end(), 1);
    std::int64_t count = 0;
    do {
        const EdgeCountProfile prof = edge_count_profile(g, position);
        for (int t = 1; t <= n - 1; ++t) {
            const __int128 r1 = prof.r_out1[t];
            const __int128 r2 = prof.r_out2[t];
            const __int128 ri = prof.r_in1[t];
            auto& a = acc[t];
            a[0] += r1;
            a[1] += r2;
            a[2] += ri;
            if (max_order >= 2) {
                a[3] += r1 * r1;
                a[4] += r2 * r2;
                a[5] += r1 * r2;
                a[6] += ri * ri;
                a[7] += ri * r1;
                a[8] += ri * r2;
            }
            if (max_order >= 3) {
                a[9] += r1 * r1 * r1;
                a[10] += r2 * r2 * r2;
                a[11] += r1 * r1 * r2;
                a[12] += r1 * r2 * r2;
                a[13] += ri * ri * ri;
                a[14] += ri * ri * r1;
                a[15] += ri * ri * r2;
                a[16] += ri * r1 * r1;
                a[17] += ri * r2 * r2;
                a[18] += ri * r1 * r2;
            }
        }
        ++count;
    } while (std::next_permutation(position.begin(), position.end()));

    ExactMoments out;
    out.n = n;
    out.permutations = count;
    out.by_t.resize(n);
    const long double inv = 1.0L / static_cast<long double>(count);
    for (int t = 1; t <= n - 1; ++t) {
        const auto& a = acc[t];
        auto val = [&](int i) { return static_cast<double>(static_cast<long double>(a[i]) * inv); };
        RawMoments& r = out.by_t[t];
        r.r1 = val(0);
        r.r2 = val(1);
        r.rin = val(2);
        r.r1r1 = val(3);
        r.r2r2 = val(4);
        r.r1r2 = val(5);
        r.rinrin = val(6);
        r.rinr1 = val(7);
        r.rinr2 = val(8);
        r.r1c = val(9);
        r.r2c = val(10);
        r.r1r1r2 = val(11);
        r.r1r2r2 = val(12);
        r.rinc = val(13);
        r.rin2r1 = val(14);
        r.rin2r2 = val(15);
        r.rinr1r1 = val(16);
        r.rinr2r2 = val(17);
        r.rinr1r2 = val(18);
    }
    return out;
}

RawMoments enumerate_null_moments(const SimilarityGraph& g, int t, int max_order) {
    if (t < 1 || t > g.n - 1) throw config_error("t must lie in 1..n-1");
    return enumerate_null_moments(g, max_order).at(t);
}

}  // namespace rmcpd
