#include "rmcpd/detect.hpp"

#include <algorithm>
#include <cmath>

#include "rmcpd/counts.hpp"
#include "rmcpd/errors.hpp"
#include "rmcpd/graph.hpp"
#include "rmcpd/scan.hpp"

namespace rmcpd {

void TestOptions::validate() const {
    if (k < 1) throw config_error("k must be >= 1");
    if (!(n0_frac > 0.0 && n0_frac < n1_frac && n1_frac < 1.0))
        throw config_error("window fractions must satisfy 0 < f0 < f1 < 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("alpha must lie in (0, 1)");
    if (permutations < 0) throw config_error("permutations must be >= 0");
    if (quad_refine < 1 || quad_refine > 64) throw config_error("quad_refine must be in 1..64");
}

std::pair<int, int> TestOptions::window(int n) const {
    int n0 = static_cast<int>(std::ceil(n0_frac * n));
    int n1 = static_cast<int>(std::floor(n1_frac * n));
    n0 = std::clamp(n0, 1, n - 1);
    n1 = std::clamp(n1, n0, n - 1);
    return {n0, n1};
}

DetectResult run_detect(const PanelDataset& ds, const TestOptions& options) {
    options.validate();
    ds.validate();
    const int n = ds.n;
    if (n < 4) throw config_error("the test requires at least 4 individuals");

    DetectResult out;
    out.n = n;
    out.ell = ds.ell;
    out.d = ds.d;
    out.alpha = options.alpha;
    out.correction = options.correction;

    int k = options.k;
    const auto max_k = static_cast<int>(ds.node_count() / 2);
    if (k > max_k) {
        k = max_k;
        out.warnings.push_back("k reduced to " + std::to_string(k) + " (k-MST needs k <= N/2)");
    }
    out.k = k;

    const SimilarityGraph graph = build_similarity_graph(ds, k, options.threads);
    out.graph_edges = static_cast<std::int64_t>(graph.edges.size());
    out.g_out = graph.g_out;
    out.g_in = graph.g_in;
    if (ds.ell >= 2 && graph.g_in == 0)
        out.warnings.push_back("repeated measures present but the graph has no within-individual edges");

    const MomentContext moments(graph);
    out.varrho = moments.varrho();
    out.varrho_degenerate = moments.varrho_degenerate();

    const EdgeCountProfile profile = edge_count_profile(graph);
    ScanProfile scan = standardized_scans(profile, moments);
    for (const auto& w : scan.warnings) out.warnings.push_back(w);

    const auto [n0, n1] = options.window(n);
    out.n0 = n0;
    out.n1 = n1;
    const auto [tau, m_star] = max_statistic(scan, n0, n1);
    out.tau_hat = tau;
    out.m_star = m_star;
    out.tilde_in_max = scan.tilde_enabled;

    // Combined p-value at b = M*.
    const CombinedPValue pm = combined_pvalue(m_star, n, n0, n1, moments, options.correction,
                                              options.quad_refine, scan.tilde_enabled);
    out.p_m = pm.p_m;
    out.reject = out.p_m < options.alpha;

    // Per-channel reporting: statistic at tau_hat, own maximum, own p-value.
    auto fill = [&](ChannelSummary& cs, Channel ch, const std::vector<double>& z, bool absolute, bool enabled) {
        cs.enabled = enabled;
        if (!enabled) return;
        cs.z_at_tau = z[tau];
        double best = -1.0;
        int arg = 0;
        for (int t = n0; t <= n1; ++t) {
            if (std::isnan(z[t])) continue;
            const double v = absolute ? std::abs(z[t]) : z[t];
            if (v > best) {
                best = v;
                arg = t;
            }
        }
        cs.max_stat = best;
        cs.argmax = arg;
        if (best > 0) {
            TailQuery q{best, n, n0, n1, ch, options.correction, options.quad_refine};
            const PValueResult pr = channel_pvalue(q, &moments);
            cs.p_analytic = pr.p;
            cs.p_raw = pr.p_raw;
            cs.dropped_nodes = pr.dropped_nodes;
            cs.fell_back_a1 = pr.fell_back_a1;
        }
    };
    fill(out.out_w, Channel::out_w, scan.z_out_w, false, scan.out_w_enabled);
    fill(out.out_d, Channel::out_d, scan.z_out_d, true, scan.out_d_enabled);
    fill(out.in_tilde, Channel::in_tilde, scan.z_in_tilde, true, scan.tilde_enabled);

    if (options.permutations > 0) {
        PermutationOptions popt;
        popt.replicates = options.permutations;
        popt.seed = options.seed;
        popt.threads = options.threads;
        const PermutationResult perm = permutation_test(graph, moments, n0, n1, popt);
        out.p_m_permutation = perm.p_value(m_star, Channel::combined);
        if (out.out_w.enabled) out.out_w.p_permutation = perm.p_value(out.out_w.max_stat, Channel::out_w);
        if (out.out_d.enabled) out.out_d.p_permutation = perm.p_value(out.out_d.max_stat, Channel::out_d);
        if (out.in_tilde.enabled)
            out.in_tilde.p_permutation = perm.p_value(out.in_tilde.max_stat, Channel::in_tilde);
    }
    return out;
}

}  // namespace rmcpd
