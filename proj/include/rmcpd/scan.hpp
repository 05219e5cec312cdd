#pragma once

#include <string>
#include <vector>

#include "rmcpd/counts.hpp"
#include "rmcpd/moments.hpp"

namespace rmcpd {

// Standardized scan processes over t = 1..n-1 (arrays sized n, indexed by t,
// NaN where a channel is unavailable) plus the max-type statistic
// M(t) = max(Z_out,w, |Z_out,d|, |Z~_in|) over the enabled channels.
struct ScanProfile {
    int n = 0;
    double varrho = 0;
    bool out_w_enabled = true;
    bool out_d_enabled = true;
    bool tilde_enabled = true;  // orthogonalized within channel
    std::vector<double> z_out_w, z_out_d, z_in, z_in_tilde, m;
    std::vector<std::string> warnings;

    int n0 = 0, n1 = 0;   // last window applied by max_statistic
    int tau_hat = 0;
    double m_star = 0;
};

// z = (R - mu)/sigma per channel; z~_in = (z_in - rho*z_out,d)/sqrt(1-rho^2).
// Channels with degenerate variance (globally, or at individual t) are left
// out of M(t) with a recorded warning.
ScanProfile standardized_scans(const EdgeCountProfile& profile, const MomentContext& moments);

// Maximizer of M(t) over the window [n0, n1]; ties break to the smallest t.
// Stores the window and result in `scan` and returns (tau_hat, m_star).
std::pair<int, double> max_statistic(ScanProfile& scan, int n0, int n1);

}  // namespace rmcpd
