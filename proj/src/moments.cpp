#include "rmcpd/moments.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "rmcpd/errors.hpp"

namespace rmcpd {

namespace {

// Variances smaller than this are treated as degenerate (exact zeros land
// here up to rounding; genuine variances of count statistics are >= O(1/n^2)).
constexpr double kVarEps = 1e-9;

std::uint64_t pair_key(std::int32_t u, std::int32_t v) {
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

}  // namespace

GraphAggregates GraphAggregates::from(const SimilarityGraph& g) {
    GraphAggregates a;
    const int n = g.n;
    a.n = n;
    a.m = g.g_out;
    a.g = g.g_in;

    const auto& w = g.d_diag;
    const auto& deg = g.d_row;
    for (int u = 0; u < n; ++u) {
        a.sdeg2 += deg[u] * deg[u];
        a.sw2 += w[u] * w[u];
        a.sw3 += w[u] * w[u] * w[u];
        a.swd += w[u] * deg[u];
        a.a_in1 += w[u] * w[u] * deg[u];
    }

    // Adjacency (neighbor, count) per individual, sorted by neighbor, plus a
    // hash map for O(1) D_uv lookups.
    std::vector<std::vector<std::pair<std::int32_t, std::int64_t>>> adj(n);
    std::unordered_map<std::uint64_t, std::int64_t> lookup;
    lookup.reserve(g.out_pairs.size() * 2);
    for (const DPair& p : g.out_pairs) {
        adj[p.u].emplace_back(p.v, p.count);
        adj[p.v].emplace_back(p.u, p.count);
        lookup.emplace(pair_key(p.u, p.v), p.count);
    }
    auto d_at = [&](std::int32_t u, std::int32_t v) -> std::int64_t {
        if (u > v) std::swap(u, v);
        const auto it = lookup.find(pair_key(u, v));
        return it == lookup.end() ? 0 : it->second;
    };

    for (const DPair& p : g.out_pairs) {
        const std::int64_t d = p.count;
        const std::int64_t du = deg[p.u], dv = deg[p.v];
        a.p2 += d * d;
        a.p3 += d * d * d;
        a.b_pair += d * w[p.u] * w[p.v];
        a.e_a += d * d * (w[p.u] + w[p.v]);
        a.u_c += d * d * ((du - d) + (dv - d));
    }

    // Second pass over pairs for sums that need |pairs disjoint from P| and
    // the common-neighbor weight T_P = sum_z D_uz D_vz.
    std::vector<std::int64_t> wd(n, 0);  // WD_x = sum_u w_u D_ux
    for (const DPair& p : g.out_pairs) {
        wd[p.u] += w[p.v] * p.count;
        wd[p.v] += w[p.u] * p.count;
    }
    for (const DPair& p : g.out_pairs) {
        const std::int64_t d = p.count;
        const std::int32_t x = p.u, y = p.v;
        const std::int64_t dx = deg[x], dy = deg[y];
        const std::int64_t avoid_p = a.m - dx - dy + d;  // pairs disjoint from {x,y}
        a.u_b += d * d * avoid_p;
        a.e_c += d * (w[x] + w[y]) * avoid_p;

        // 3-paths with middle edge P: exclude common-neighbor (triangle) terms.
        std::int64_t t_p = 0;
        const auto& shorter = adj[x].size() <= adj[y].size() ? adj[x] : adj[y];
        const std::int32_t other = adj[x].size() <= adj[y].size() ? y : x;
        for (const auto& [z, dz] : shorter)
            if (z != other) t_p += dz * d_at(other, z);
        a.tri3 += d * t_p;
        a.u_f += d * ((dx - d) * (dy - d) - t_p);

        // G_mix: sum over z outside P of w_z * (pairs avoiding {x, y, z}).
        a.g_mix += d * ((a.g - w[x] - w[y]) * avoid_p - (a.swd - w[x] * dx - w[y] * dy) +
                        (wd[x] - w[y] * d) + (wd[y] - w[x] * d));
    }

    // Per-center wedge and star sums. e1/e2/e3 are elementary symmetric sums
    // of the incident pair counts, built incrementally.
    for (int v = 0; v < n; ++v) {
        std::int64_t e1 = 0, e2 = 0, e3 = 0;
        std::int64_t s2 = 0, sw_lin = 0, s2w = 0;
        for (const auto& [x, dxv] : adj[v]) {
            e3 += e2 * dxv;
            e2 += e1 * dxv;
            e1 += dxv;
            s2 += dxv * dxv;
            sw_lin += dxv * w[x];
            s2w += dxv * dxv * w[x];
        }
        a.u_g += e3;
        // E_b over wedges (x-v-z): (w_x + w_v + w_z) contributions.
        const std::int64_t wedges_v = (e1 * e1 - s2) / 2;
        a.e_b += w[v] * wedges_v + sw_lin * e1 - s2w;
    }
    a.cher2 = a.sdeg2 - 2 * a.p2;

    // U_e: wedge (x-v-z) times the weight of pairs disjoint from {x, v, z}.
    for (int v = 0; v < n; ++v) {
        const auto& nb = adj[v];
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                const auto [x, dxv] = nb[i];
                const auto [z, dvz] = nb[j];
                a.u_e += dxv * dvz *
                         (a.m - deg[x] - deg[v] - deg[z] + dxv + dvz + d_at(x, z));
            }
    }

    a.f_d2 = a.m * a.m + a.p2 - a.sdeg2;
    a.u_d6 = a.m * a.m * a.m - a.p3 - 3 * a.u_c - 3 * a.u_b - 2 * a.tri3 - 6 * a.u_g - 6 * a.u_f - 6 * a.u_e;

    a.q_out_num = a.n * a.sdeg2 - 4 * a.m * a.m;
    a.q_in_num = a.n * a.sw2 - a.g * a.g;
    a.s_num = a.n * a.swd - 2 * a.m * a.g;
    return a;
}

MomentContext::MomentContext(const SimilarityGraph& g) : MomentContext(GraphAggregates::from(g)) {}

MomentContext::MomentContext(GraphAggregates agg) : agg_(agg) {
    if (agg_.n < 4) throw config_error("moment formulas require n >= 4 individuals");
    varrho_degenerate_ = (agg_.q_out_num <= 0 || agg_.q_in_num <= 0);
    if (!varrho_degenerate_)
        varrho_ = static_cast<double>(agg_.s_num) /
                  std::sqrt(static_cast<double>(agg_.q_out_num) * static_cast<double>(agg_.q_in_num));
}

namespace {

double falling(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (x - i);
    return r;
}

}  // namespace

RawMoments MomentContext::raw(double t) const {
    const auto& a = agg_;
    const double n = static_cast<double>(a.n);
    // q(i,j) = [t]_i [n-t]_j / [n]_{i+j}; zero when i+j > n, where every
    // matching configuration weight is zero as well.
    auto q = [&](int i, int j) {
        const double den = falling(n, i + j);
        return den == 0.0 ? 0.0 : falling(t, i) * falling(n - t, j) / den;
    };

    const double m = static_cast<double>(a.m), g = static_cast<double>(a.g);
    const double p2 = static_cast<double>(a.p2), p3 = static_cast<double>(a.p3);
    const double cher2 = static_cast<double>(a.cher2), f_d2 = static_cast<double>(a.f_d2);
    const double tri6 = 2.0 * static_cast<double>(a.tri3);
    const double sw2 = static_cast<double>(a.sw2), sw3 = static_cast<double>(a.sw3);
    const double swd = static_cast<double>(a.swd), a_in1 = static_cast<double>(a.a_in1);
    const double b_pair = static_cast<double>(a.b_pair), e_a = static_cast<double>(a.e_a);
    const double u_c = static_cast<double>(a.u_c), u_b = static_cast<double>(a.u_b);
    const double u_g = static_cast<double>(a.u_g), u_f = static_cast<double>(a.u_f);
    const double u_e = static_cast<double>(a.u_e), u_d6 = static_cast<double>(a.u_d6);
    const double e_b = static_cast<double>(a.e_b), e_c = static_cast<double>(a.e_c);
    const double g_mix = static_cast<double>(a.g_mix);
    const double c_mix = swd * g - a_in1 - 2.0 * b_pair;
    const double d_mix = 0.5 * m * (g * g - sw2) - (swd * g - a_in1) + b_pair;

    RawMoments r;
    r.r1 = q(2, 0) * m;
    r.r2 = q(0, 2) * m;
    r.rin = q(1, 0) * g;

    r.r1r1 = q(2, 0) * p2 + q(3, 0) * cher2 + q(4, 0) * f_d2;
    r.r2r2 = q(0, 2) * p2 + q(0, 3) * cher2 + q(0, 4) * f_d2;
    r.r1r2 = q(2, 2) * f_d2;
    r.rinrin = q(1, 0) * sw2 + q(2, 0) * (g * g - sw2);
    r.rinr1 = q(2, 0) * swd + q(3, 0) * (m * g - swd);
    r.rinr2 = q(1, 2) * (m * g - swd);

    r.r1c = q(2, 0) * p3 + q(3, 0) * (3.0 * u_c + tri6) + q(4, 0) * (3.0 * u_b + 6.0 * u_g + 6.0 * u_f) +
            q(5, 0) * 6.0 * u_e + q(6, 0) * u_d6;
    r.r2c = q(0, 2) * p3 + q(0, 3) * (3.0 * u_c + tri6) + q(0, 4) * (3.0 * u_b + 6.0 * u_g + 6.0 * u_f) +
            q(0, 5) * 6.0 * u_e + q(0, 6) * u_d6;
    r.r1r1r2 = q(2, 2) * u_b + 2.0 * q(3, 2) * u_e + q(4, 2) * u_d6;
    r.r1r2r2 = q(2, 2) * u_b + 2.0 * q(2, 3) * u_e + q(2, 4) * u_d6;

    r.rinc = q(1, 0) * sw3 + 3.0 * q(2, 0) * (sw2 * g - sw3) + q(3, 0) * (g * g * g - 3.0 * g * sw2 + 2.0 * sw3);
    r.rin2r1 = q(2, 0) * (a_in1 + 2.0 * b_pair) + q(3, 0) * (sw2 * m - a_in1 + 2.0 * c_mix) + q(4, 0) * 2.0 * d_mix;
    r.rin2r2 = q(1, 2) * (sw2 * m - a_in1) + q(2, 2) * 2.0 * d_mix;
    r.rinr1r1 = q(2, 0) * e_a + q(3, 0) * (p2 * g - e_a + 2.0 * e_b) + q(4, 0) * (cher2 * g - 2.0 * e_b + 2.0 * e_c) +
                q(5, 0) * (f_d2 * g - 2.0 * e_c);
    r.rinr2r2 = q(1, 2) * (p2 * g - e_a) + q(1, 3) * (cher2 * g - 2.0 * e_b) + q(1, 4) * (f_d2 * g - 2.0 * e_c);
    r.rinr1r2 = q(2, 2) * e_c + q(3, 2) * g_mix;
    return r;
}

Lemma1Moments MomentContext::lemma1(double t) const {
    const auto& a = agg_;
    const double n = static_cast<double>(a.n);
    const double m = static_cast<double>(a.m), g = static_cast<double>(a.g);
    const double s = n - t;  // individuals after the split
    const double denom4 = n * (n - 1) * (n - 2) * (n - 3);
    const double q_out = static_cast<double>(a.q_out_num) / n;  // sum D_u^2 - 4|G_out|^2/n
    const double q_in = static_cast<double>(a.q_in_num) / n;
    const double s_cov = static_cast<double>(a.s_num) / n;      // sum D_uu D_u - 2|G_in||G_out|/n
    const double p2 = static_cast<double>(a.p2);                // sum_{u<v} D_uv^2
    const double r2c = 2.0 * m * m / (n * (n - 1));

    Lemma1Moments l;
    l.e_out1 = t * (t - 1) / (n * (n - 1)) * m;
    l.e_out2 = s * (s - 1) / (n * (n - 1)) * m;
    l.e_in = t / n * g;

    const double c = t * (t - 1) * s * (s - 1) / denom4;
    // The (t-2)/(n-t-1) and (n-t-2)/(t-1) factors of the variance displays are
    // folded into the prefactor so t = 1 and t = n-1 evaluate cleanly.
    l.var_out1 = c * (p2 - r2c) + t * (t - 1) * (t - 2) * s / denom4 * q_out;
    l.var_out2 = c * (p2 - r2c) + t * s * (s - 1) * (s - 2) / denom4 * q_out;
    l.var_in = t * s / (n * (n - 1)) * q_in;
    l.cov_out12 = c * (p2 - q_out - r2c);
    l.cov_out1_in = t * (t - 1) * s / (n * (n - 1) * (n - 2)) * s_cov;
    l.cov_out2_in = -t * s * (s - 1) / (n * (n - 1) * (n - 2)) * s_cov;
    return l;
}

ThirdMoments MomentContext::third_moments(double t) const {
    const RawMoments r = raw(t);
    const double n = static_cast<double>(agg_.n);
    const double al = (n - t - 1) / (n - 2), be = (t - 1) / (n - 2);

    ThirdMoments tm;
    tm.rw3 = al * al * al * r.r1c + 3.0 * al * al * be * r.r1r1r2 + 3.0 * al * be * be * r.r1r2r2 +
             be * be * be * r.r2c;
    tm.rd3 = r.r1c - 3.0 * r.r1r1r2 + 3.0 * r.r1r2r2 - r.r2c;
    tm.rin3 = r.rinc;
    tm.rin2_rd = r.rin2r1 - r.rin2r2;
    tm.rin_rd2 = r.rinr1r1 - 2.0 * r.rinr1r2 + r.rinr2r2;
    return tm;
}

MomentSet MomentContext::at(double t) const {
    const auto& a = agg_;
    const double n = static_cast<double>(a.n);
    if (!(t > 0.0 && t < n)) throw config_error("t must lie in (0, n)");

    const Lemma1Moments l = lemma1(t);
    const double al = (n - t - 1) / (n - 2), be = (t - 1) / (n - 2);

    MomentSet ms;
    ms.varrho = varrho_;
    ms.cov_out1_out2 = l.cov_out12;
    ms.cov_out1_in = l.cov_out1_in;
    ms.cov_out2_in = l.cov_out2_in;

    ms.mu_out_w = al * l.e_out1 + be * l.e_out2;
    ms.mu_out_d = l.e_out1 - l.e_out2;
    ms.mu_in = l.e_in;

    const double var_w = al * al * l.var_out1 + be * be * l.var_out2 + 2.0 * al * be * l.cov_out12;
    const double var_d = l.var_out1 + l.var_out2 - 2.0 * l.cov_out12;
    const double var_in = l.var_in;
    ms.out_w_ok = var_w > kVarEps;
    ms.out_d_ok = var_d > kVarEps;
    ms.in_ok = var_in > kVarEps;
    ms.sigma_out_w = ms.out_w_ok ? std::sqrt(var_w) : 0.0;
    ms.sigma_out_d = ms.out_d_ok ? std::sqrt(var_d) : 0.0;
    ms.sigma_in = ms.in_ok ? std::sqrt(var_in) : 0.0;

    const ThirdMoments tm = third_moments(t);
    if (ms.out_w_ok)
        ms.gamma_out_w = (tm.rw3 - 3.0 * ms.mu_out_w * var_w - std::pow(ms.mu_out_w, 3)) / std::pow(ms.sigma_out_w, 3);
    if (ms.out_d_ok)
        ms.gamma_out_d = (tm.rd3 - 3.0 * ms.mu_out_d * var_d - std::pow(ms.mu_out_d, 3)) / std::pow(ms.sigma_out_d, 3);
    if (ms.in_ok)
        ms.gamma_in = (tm.rin3 - 3.0 * ms.mu_in * var_in - std::pow(ms.mu_in, 3)) / std::pow(ms.sigma_in, 3);

    ms.tilde_ok = ms.in_ok && ms.out_d_ok && !varrho_degenerate_ && (1.0 - varrho_ * varrho_) > 1e-12;
    if (ms.tilde_ok) {
        const RawMoments r = raw(t);
        const double e_rinrd = r.rinr1 - r.rinr2;
        const double e_rd2 = r.r1r1 - 2.0 * r.r1r2 + r.r2r2;
        // Central cross moments E(Z_in^2 Z_out,d) and E(Z_in Z_out,d^2).
        const double zzd = (tm.rin2_rd - ms.mu_out_d * r.rinrin - 2.0 * ms.mu_in * e_rinrd +
                            2.0 * ms.mu_in * ms.mu_in * ms.mu_out_d) /
                           (var_in * ms.sigma_out_d);
        const double zdd = (tm.rin_rd2 - ms.mu_in * e_rd2 - 2.0 * ms.mu_out_d * e_rinrd +
                            2.0 * ms.mu_in * ms.mu_out_d * ms.mu_out_d) /
                           (ms.sigma_in * var_d);
        const double rho = varrho_;
        ms.gamma_in_tilde = (ms.gamma_in - 3.0 * rho * zzd + 3.0 * rho * rho * zdd - rho * rho * rho * ms.gamma_out_d) /
                            std::pow(1.0 - rho * rho, 1.5);
    }
    return ms;
}

}  // namespace rmcpd
