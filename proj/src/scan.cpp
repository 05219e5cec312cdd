#include "rmcpd/scan.hpp"

#include <cmath>
#include <limits>

#include "rmcpd/errors.hpp"

namespace rmcpd {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

ScanProfile standardized_scans(const EdgeCountProfile& profile, const MomentContext& moments) {
    const int n = profile.n;
    if (n != moments.n()) throw config_error("profile and moment context disagree on n");

    ScanProfile scan;
    scan.n = n;
    scan.varrho = moments.varrho();
    scan.z_out_w.assign(n, kNaN);
    scan.z_out_d.assign(n, kNaN);
    scan.z_in.assign(n, kNaN);
    scan.z_in_tilde.assign(n, kNaN);
    scan.m.assign(n, kNaN);

    if (profile.g_in == 0) {
        scan.tilde_enabled = false;
        scan.warnings.push_back("no within-individual edges; within channel disabled");
    } else if (moments.varrho_degenerate()) {
        scan.tilde_enabled = false;
        scan.warnings.push_back("degenerate varrho; within channel disabled");
    } else if (1.0 - scan.varrho * scan.varrho <= 1e-12) {
        scan.tilde_enabled = false;
        scan.warnings.push_back("|varrho| = 1; within channel disabled");
    }
    const double rho = scan.varrho;
    const double tilde_scale = scan.tilde_enabled ? 1.0 / std::sqrt(1.0 - rho * rho) : 0.0;

    bool any_w = false, any_d = false;
    for (int t = 1; t <= n - 1; ++t) {
        const MomentSet ms = moments.at(t);
        const double al = static_cast<double>(n - t - 1) / (n - 2);
        const double be = static_cast<double>(t - 1) / (n - 2);
        double m_val = -std::numeric_limits<double>::infinity();
        bool have = false;
        if (ms.out_w_ok) {
            const double rw = (al * profile.r_out1[t] + be * profile.r_out2[t]);
            const double z = (rw - ms.mu_out_w) / ms.sigma_out_w;
            scan.z_out_w[t] = z;
            m_val = std::max(m_val, z);
            have = any_w = true;
        }
        double zd = kNaN;
        if (ms.out_d_ok) {
            zd = (static_cast<double>(profile.r_out1[t] - profile.r_out2[t]) - ms.mu_out_d) / ms.sigma_out_d;
            scan.z_out_d[t] = zd;
            m_val = std::max(m_val, std::abs(zd));
            have = any_d = true;
        }
        if (ms.in_ok) scan.z_in[t] = (static_cast<double>(profile.r_in1[t]) - ms.mu_in) / ms.sigma_in;
        if (scan.tilde_enabled && ms.tilde_ok && ms.out_d_ok) {
            const double zt = (scan.z_in[t] - rho * zd) * tilde_scale;
            scan.z_in_tilde[t] = zt;
            m_val = std::max(m_val, std::abs(zt));
            have = true;
        }
        if (have) scan.m[t] = m_val;
    }
    if (!any_d) {
        scan.out_d_enabled = false;
        scan.warnings.push_back("difference channel degenerate at every t");
    }
    if (!any_w) {
        scan.out_w_enabled = false;
        scan.warnings.push_back("weighted channel degenerate at every t");
    }
    return scan;
}

std::pair<int, double> max_statistic(ScanProfile& scan, int n0, int n1) {
    if (n0 < 1 || n1 > scan.n - 1 || n0 > n1) throw config_error("scan window must satisfy 1 <= n0 <= n1 <= n-1");
    int tau = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int t = n0; t <= n1; ++t) {
        if (std::isnan(scan.m[t])) continue;
        if (scan.m[t] > best) {
            best = scan.m[t];
            tau = t;
        }
    }
    if (tau == 0) throw numeric_error("scan statistic undefined everywhere in the window");
    scan.n0 = n0;
    scan.n1 = n1;
    scan.tau_hat = tau;
    scan.m_star = best;
    return {tau, best};
}

}  // namespace rmcpd
