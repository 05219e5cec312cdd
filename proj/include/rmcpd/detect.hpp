#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmcpd/dataset.hpp"
#include "rmcpd/permutation.hpp"
#include "rmcpd/pvalue.hpp"

namespace rmcpd {

struct TestOptions {
    int k = 9;                 // graph density (k-MST); clamped to N/2 with a warning
    double n0_frac = 0.05;     // scan window [ceil(f0*n), floor(f1*n)]
    double n1_frac = 0.95;
    double alpha = 0.05;
    Correction correction = Correction::A2;
    int permutations = 0;      // B; 0 = analytic only
    std::uint64_t seed = 0;
    int quad_refine = 1;
    int threads = 0;

    void validate() const;
    std::pair<int, int> window(int n) const;
};

struct ChannelSummary {
    bool enabled = false;
    double z_at_tau = 0;       // channel statistic at the combined maximizer
    double max_stat = 0;       // channel's own scan maximum
    int argmax = 0;
    double p_analytic = 1;     // tail probability of the channel's own maximum
    double p_raw = 1;
    int dropped_nodes = 0;
    bool fell_back_a1 = false;
    std::optional<double> p_permutation;
};

// Single change-point test: build graph, scan, analytic p-value of the
// max-type statistic, optional permutation p-value.
struct DetectResult {
    int n = 0, ell = 0, d = 0;
    int k = 0;
    int n0 = 0, n1 = 0;
    std::int64_t graph_edges = 0, g_out = 0, g_in = 0;
    double varrho = 0;
    bool varrho_degenerate = false;

    int tau_hat = 0;
    double m_star = 0;
    double p_m = 1;
    std::optional<double> p_m_permutation;
    double alpha = 0.05;
    Correction correction = Correction::A2;
    bool reject = false;
    bool tilde_in_max = true;

    ChannelSummary out_w, out_d, in_tilde;
    std::vector<std::string> warnings;
};

DetectResult run_detect(const PanelDataset& ds, const TestOptions& options);

}  // namespace rmcpd
