#include "rmcpd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "rmcpd/errors.hpp"

namespace rmcpd {

namespace {

int resolve_threads(int threads, std::int64_t work) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (work < 1 << 16) threads = 1;
    return std::min<std::int64_t>(threads, 64);
}

}  // namespace

DistanceMatrix pairwise_distances(const PanelDataset& ds, Metric metric, int threads) {
    ds.validate();
    if (metric != Metric::euclidean) throw config_error("unsupported metric");
    const std::int64_t N = ds.node_count();
    DistanceMatrix dm;
    dm.n_nodes = N;
    dm.values.assign(static_cast<std::size_t>(N) * N, 0.0);
    const int d = ds.d;
    const double* base = ds.values.data();

    auto fill_rows = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            const double* xi = base + i * d;
            for (std::int64_t j = i + 1; j < N; ++j) {
                const double* xj = base + j * d;
                double s = 0.0;
                for (int c = 0; c < d; ++c) {
                    const double diff = xi[c] - xj[c];
                    s += diff * diff;
                }
                dm.values[i * N + j] = std::sqrt(s);
            }
        }
    };

    const int T = resolve_threads(threads, N * N);
    if (T == 1) {
        fill_rows(0, N);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < T; ++t) {
            // Interleaved-ish static split over rows; upper triangle rows get
            // shorter toward the end, so chunk by equal area instead.
            const double f0 = static_cast<double>(t) / T, f1 = static_cast<double>(t + 1) / T;
            const auto row_at = [N](double f) {
                return static_cast<std::int64_t>(std::llround(N * (1.0 - std::sqrt(1.0 - f))));
            };
            pool.emplace_back(fill_rows, row_at(f0), row_at(f1));
        }
        for (auto& th : pool) th.join();
    }
    for (std::int64_t i = 0; i < N; ++i)
        for (std::int64_t j = i + 1; j < N; ++j) dm.values[j * N + i] = dm.values[i * N + j];
    return dm;
}

namespace {

struct DisjointSet {
    std::vector<std::int32_t> parent, rank_;
    explicit DisjointSet(std::int64_t n) : parent(n), rank_(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
    std::int32_t find(std::int32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }
};

}  // namespace

std::vector<Edge> build_kmst(const DistanceMatrix& dist, int k) {
    const std::int64_t N = dist.n_nodes;
    if (k < 1) throw config_error("k-MST requires k >= 1");
    if (N < 2 || k >= N)
        throw config_error("k-MST requires N > k (got k=" + std::to_string(k) + ", N=" + std::to_string(N) + ")");

    struct WeightedEdge {
        double w;
        std::int32_t a, b;
    };
    std::vector<WeightedEdge> all;
    all.reserve(static_cast<std::size_t>(N) * (N - 1) / 2);
    for (std::int32_t i = 0; i < N; ++i)
        for (std::int32_t j = i + 1; j < N; ++j) all.push_back({dist(i, j), i, j});
    std::sort(all.begin(), all.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
        if (x.w != y.w) return x.w < y.w;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    // Each layer is the minimum spanning forest of the still-unused edges:
    // for small N (or large k) the leftover graph may disconnect, in which
    // case the layer contributes fewer than N-1 edges. For the practical
    // regime N >= 2k every layer is a full spanning tree and |result| = k(N-1).
    std::vector<Edge> result;
    result.reserve(static_cast<std::size_t>(k) * (N - 1));
    std::vector<char> used(all.size(), 0);
    for (int layer = 0; layer < k; ++layer) {
        DisjointSet ds(N);
        std::int64_t taken = 0;
        for (std::size_t e = 0; e < all.size() && taken < N - 1; ++e) {
            if (used[e]) continue;
            if (ds.unite(all[e].a, all[e].b)) {
                used[e] = 1;
                result.push_back({all[e].a, all[e].b});
                ++taken;
            }
        }
        if (taken == 0)
            throw config_error("k-MST layer " + std::to_string(layer + 1) + " has no edges left; reduce k");
    }
    return result;
}

SimilarityGraph decompose(std::int64_t node_count, std::vector<Edge> edges,
                          std::vector<std::int32_t> individual_of) {
    if (static_cast<std::int64_t>(individual_of.size()) != node_count)
        throw config_error("individual_of must have one entry per node");
    int n = 0;
    for (auto u : individual_of) {
        if (u < 0) throw config_error("negative individual index");
        n = std::max(n, u + 1);
    }

    SimilarityGraph g;
    g.node_count = node_count;
    g.n = n;
    g.individual_of = std::move(individual_of);
    g.d_diag.assign(n, 0);
    g.d_row.assign(n, 0);

    std::unordered_map<std::uint64_t, std::int64_t> pair_count;
    pair_count.reserve(edges.size() * 2);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto [a, b] = edges[e];
        if (a == b) throw data_error("self-loop on node " + std::to_string(a));
        if (a < 0 || b < 0 || a >= node_count || b >= node_count) throw data_error("edge endpoint out of range");
        const std::int32_t u = g.individual_of[a];
        const std::int32_t v = g.individual_of[b];
        if (u == v) {
            g.in_edges.push_back(e);
            ++g.d_diag[u];
            ++g.g_in;
        } else {
            g.out_edges.push_back(e);
            const auto lo = std::min(u, v), hi = std::max(u, v);
            ++pair_count[(static_cast<std::uint64_t>(lo) << 32) | static_cast<std::uint32_t>(hi)];
            ++g.g_out;
        }
    }
    g.edges = std::move(edges);

    g.out_pairs.reserve(pair_count.size());
    for (const auto& [key, count] : pair_count) {
        const auto u = static_cast<std::int32_t>(key >> 32);
        const auto v = static_cast<std::int32_t>(key & 0xFFFFFFFFu);
        g.out_pairs.push_back({u, v, count});
        g.d_row[u] += count;
        g.d_row[v] += count;
    }
    std::sort(g.out_pairs.begin(), g.out_pairs.end(), [](const DPair& x, const DPair& y) {
        return x.u != y.u ? x.u < y.u : x.v < y.v;
    });
    return g;
}

SimilarityGraph build_similarity_graph(const PanelDataset& ds, int k, int threads) {
    const DistanceMatrix dm = pairwise_distances(ds, Metric::euclidean, threads);
    std::vector<Edge> edges = build_kmst(dm, k);
    std::vector<std::int32_t> individual_of(ds.node_count());
    for (std::int64_t node = 0; node < ds.node_count(); ++node)
        individual_of[node] = ds.individual_of(node);
    return decompose(ds.node_count(), std::move(edges), std::move(individual_of));
}

void write_edge_list(const SimilarityGraph& g, std::ostream& out) {
    std::vector<char> within(g.edges.size(), 0);
    for (auto e : g.in_edges) within[e] = 1;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        out << g.edges[e].a << ' ' << g.edges[e].b << ' ' << (within[e] ? "in" : "out") << '\n';
}

}  // namespace rmcpd
