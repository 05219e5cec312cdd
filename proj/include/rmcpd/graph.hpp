#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rmcpd/dataset.hpp"

namespace rmcpd {

// Dense symmetric pairwise distances with zero diagonal. Memory is O(N^2);
// intended scale is N up to a few thousand nodes.
struct DistanceMatrix {
    std::int64_t n_nodes = 0;
    std::vector<double> values;  // row-major n_nodes x n_nodes

    double operator()(std::int64_t i, std::int64_t j) const { return values[i * n_nodes + j]; }
    double& ref(std::int64_t i, std::int64_t j) { return values[i * n_nodes + j]; }
};

enum class Metric { euclidean };

DistanceMatrix pairwise_distances(const PanelDataset& ds, Metric metric = Metric::euclidean, int threads = 0);

struct Edge {
    std::int32_t a = 0;
    std::int32_t b = 0;  // a < b
    bool operator==(const Edge&) const = default;
};

// Union of k successive minimum spanning trees on the complete graph, each
// layer built by Kruskal on the edges unused by previous layers. Ties in
// edge weight break by (min node, max node), so the result is a pure
// function of (dist, k). Requires k >= 1 and k <= N/2.
std::vector<Edge> build_kmst(const DistanceMatrix& dist, int k);

// One entry per unordered individual pair with at least one connecting edge.
struct DPair {
    std::int32_t u = 0;
    std::int32_t v = 0;  // u < v
    std::int64_t count = 0;
};

// Similarity graph over n*ell measurement nodes together with its
// decomposition into between-individual (out) and within-individual (in)
// edges and the individual-level multiplicity matrix D (sparse off-diagonal
// pairs plus the diagonal).
struct SimilarityGraph {
    std::int64_t node_count = 0;
    int n = 0;  // individuals
    std::vector<std::int32_t> individual_of;  // size node_count
    std::vector<Edge> edges;
    std::vector<std::size_t> out_edges;  // indices into edges
    std::vector<std::size_t> in_edges;

    std::vector<DPair> out_pairs;        // D_uv for u != v, aggregated
    std::vector<std::int64_t> d_diag;    // D_uu, size n
    std::vector<std::int64_t> d_row;     // D_u = sum_{v != u} D_uv, size n
    std::int64_t g_out = 0;              // |G_out|
    std::int64_t g_in = 0;               // |G_in|
};

// Splits an edge list into the in/out partition and builds D. Throws on
// self-loops or out-of-range nodes.
SimilarityGraph decompose(std::int64_t node_count, std::vector<Edge> edges,
                          std::vector<std::int32_t> individual_of);

// Full pipeline: Euclidean distances -> k-MST -> decomposition.
SimilarityGraph build_similarity_graph(const PanelDataset& ds, int k = 9, int threads = 0);

// Debug export, one line per edge: "u v in|out" (0-based node ids).
void write_edge_list(const SimilarityGraph& g, std::ostream& out);

}  // namespace rmcpd
