#pragma once

#include <cstdint>
#include <vector>

#include "rmcpd/graph.hpp"

namespace rmcpd {

// Permutation-null expectations of products of R_out,1, R_out,2 and R_in,1
// up to third order at a split t. Exact rational functions of t, so t may be
// real-valued (used by the p-value quadrature between integer splits).
struct RawMoments {
    double r1 = 0, r2 = 0, rin = 0;
    double r1r1 = 0, r2r2 = 0, r1r2 = 0, rinrin = 0, rinr1 = 0, rinr2 = 0;
    double r1c = 0, r2c = 0, r1r1r2 = 0, r1r2r2 = 0;
    double rinc = 0, rin2r1 = 0, rin2r2 = 0, rinr1r1 = 0, rinr2r2 = 0, rinr1r2 = 0;
};

// First and second permutation-null moments of the three base counts.
struct Lemma1Moments {
    double e_out1 = 0, e_out2 = 0, e_in = 0;
    double var_out1 = 0, var_out2 = 0, var_in = 0;
    double cov_out12 = 0, cov_out1_in = 0, cov_out2_in = 0;
};

// Raw third moments of the derived statistics R_out,w, R_out,d, R_in,1.
struct ThirdMoments {
    double rw3 = 0, rd3 = 0, rin3 = 0;
    double rin2_rd = 0;  // E(R_in,1^2 R_out,d)
    double rin_rd2 = 0;  // E(R_in,1 R_out,d^2)
};

// Null moments of the standardized statistics at one t.
struct MomentSet {
    double mu_out_w = 0, mu_out_d = 0, mu_in = 0;
    double sigma_out_w = 0, sigma_out_d = 0, sigma_in = 0;
    double cov_out1_out2 = 0, cov_out1_in = 0, cov_out2_in = 0;
    double gamma_out_w = 0, gamma_out_d = 0, gamma_in = 0, gamma_in_tilde = 0;
    double varrho = 0;
    bool out_w_ok = false, out_d_ok = false, in_ok = false, tilde_ok = false;
};

// Individual-level multigraph sums that the moment formulas consume. All are
// exact 64-bit integer counts; w_u = D_uu, deg_u = D_u, d_P = D_uv over
// off-diagonal pairs P = {u,v}.
struct GraphAggregates {
    std::int64_t n = 0;
    std::int64_t m = 0;       // |G_out|
    std::int64_t g = 0;       // |G_in|
    std::int64_t p2 = 0;      // sum_P d^2
    std::int64_t p3 = 0;      // sum_P d^3
    std::int64_t sdeg2 = 0;   // sum_u deg^2
    std::int64_t sw2 = 0;     // sum_u w^2
    std::int64_t sw3 = 0;     // sum_u w^3
    std::int64_t swd = 0;     // sum_u w*deg
    std::int64_t a_in1 = 0;   // sum_u w^2*deg
    std::int64_t b_pair = 0;  // sum_P d*w_u*w_v
    std::int64_t e_a = 0;     // sum_P d^2*(w_u+w_v)
    std::int64_t tri3 = 0;    // 3 * (weighted triangles)
    std::int64_t u_c = 0;     // configs {P,P,Q}, |P∩Q|=1, weight d_P^2 d_Q
    std::int64_t u_b = 0;     // configs {P,P,Q}, P∩Q=∅
    std::int64_t u_g = 0;     // 3-stars: distinct pairs sharing one center
    std::int64_t u_f = 0;     // 3-paths
    std::int64_t u_e = 0;     // wedge + disjoint pair
    std::int64_t u_d6 = 0;    // 6 * (pairwise-disjoint triples)
    std::int64_t cher2 = 0;   // 2 * (weighted wedges)
    std::int64_t f_d2 = 0;    // 2 * (disjoint pair-pairs)
    std::int64_t e_b = 0;     // wedges weighted by vertex w-sums
    std::int64_t e_c = 0;     // sum_P d*(w_u+w_v)*(weight of pairs disjoint from P)
    std::int64_t g_mix = 0;   // sum_P d * sum_{z not in P} w_z * (pairs avoiding P and z)
    std::int64_t q_out_num = 0;  // n*sdeg2 - 4m^2
    std::int64_t q_in_num = 0;   // n*sw2 - g^2
    std::int64_t s_num = 0;      // n*swd - 2mg

    static GraphAggregates from(const SimilarityGraph& g);
};

// Analytic permutation-null moments of the scan statistics for one graph.
// Construction is O(graph); each evaluation at a t is O(1).
class MomentContext {
public:
    explicit MomentContext(const SimilarityGraph& g);
    explicit MomentContext(GraphAggregates agg);

    int n() const { return static_cast<int>(agg_.n); }
    const GraphAggregates& aggregates() const { return agg_; }

    // Correlation between Z_out,d(t) and Z_in(t); constant over t.
    double varrho() const { return varrho_; }
    bool varrho_degenerate() const { return varrho_degenerate_; }

    RawMoments raw(double t) const;
    Lemma1Moments lemma1(double t) const;
    ThirdMoments third_moments(double t) const;
    MomentSet at(double t) const;

private:
    GraphAggregates agg_;
    double varrho_ = 0;
    bool varrho_degenerate_ = true;
};

}  // namespace rmcpd
