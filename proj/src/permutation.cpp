#include "rmcpd/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "rmcpd/counts.hpp"
#include "rmcpd/errors.hpp"
#include "rmcpd/rng.hpp"

namespace rmcpd {

namespace {

// Per-t standardization tables so each replicate costs O(|pairs| + n).
struct MomentTables {
    int n = 0;
    double rho = 0, tilde_scale = 0;
    bool tilde_enabled = false;
    std::vector<double> mu_w, sd_w, mu_d, sd_d, mu_in, sd_in;
    std::vector<char> w_ok, d_ok, t_ok;

    explicit MomentTables(const MomentContext& mc, const SimilarityGraph& g) {
        n = mc.n();
        rho = mc.varrho();
        tilde_enabled = g.g_in > 0 && !mc.varrho_degenerate() && 1.0 - rho * rho > 1e-12;
        tilde_scale = tilde_enabled ? 1.0 / std::sqrt(1.0 - rho * rho) : 0.0;
        mu_w.assign(n, 0);
        sd_w.assign(n, 0);
        mu_d.assign(n, 0);
        sd_d.assign(n, 0);
        mu_in.assign(n, 0);
        sd_in.assign(n, 0);
        w_ok.assign(n, 0);
        d_ok.assign(n, 0);
        t_ok.assign(n, 0);
        for (int t = 1; t <= n - 1; ++t) {
            const MomentSet ms = mc.at(t);
            mu_w[t] = ms.mu_out_w;
            sd_w[t] = ms.sigma_out_w;
            mu_d[t] = ms.mu_out_d;
            sd_d[t] = ms.sigma_out_d;
            mu_in[t] = ms.mu_in;
            sd_in[t] = ms.sigma_in;
            w_ok[t] = ms.out_w_ok;
            d_ok[t] = ms.out_d_ok;
            t_ok[t] = tilde_enabled && ms.tilde_ok;
        }
    }
};

struct ReplicateMaxes {
    double combined, w, d, in, tilde;
};

ReplicateMaxes scan_maxes(const EdgeCountProfile& prof, const MomentTables& tab, int n0, int n1) {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    ReplicateMaxes mx{kNegInf, kNegInf, kNegInf, kNegInf, kNegInf};
    const int n = tab.n;
    for (int t = n0; t <= n1; ++t) {
        double m_val = kNegInf;
        if (tab.w_ok[t]) {
            const double al = static_cast<double>(n - t - 1) / (n - 2);
            const double be = static_cast<double>(t - 1) / (n - 2);
            const double z = (al * prof.r_out1[t] + be * prof.r_out2[t] - tab.mu_w[t]) / tab.sd_w[t];
            mx.w = std::max(mx.w, z);
            m_val = std::max(m_val, z);
        }
        double zd = 0;
        if (tab.d_ok[t]) {
            zd = (static_cast<double>(prof.r_out1[t] - prof.r_out2[t]) - tab.mu_d[t]) / tab.sd_d[t];
            mx.d = std::max(mx.d, std::abs(zd));
            m_val = std::max(m_val, std::abs(zd));
        }
        if (tab.sd_in[t] > 0) {
            const double zi = (static_cast<double>(prof.r_in1[t]) - tab.mu_in[t]) / tab.sd_in[t];
            mx.in = std::max(mx.in, std::abs(zi));
            if (tab.t_ok[t] && tab.d_ok[t]) {
                const double zt = (zi - tab.rho * zd) * tab.tilde_scale;
                mx.tilde = std::max(mx.tilde, std::abs(zt));
                m_val = std::max(m_val, std::abs(zt));
            }
        }
        mx.combined = std::max(mx.combined, m_val);
    }
    return mx;
}

}  // namespace

PermutationResult permutation_test(const SimilarityGraph& g, const MomentContext& moments, int n0, int n1,
                                   const PermutationOptions& options) {
    const int n = g.n;
    if (n0 < 1 || n1 > n - 1 || n0 > n1) throw config_error("permutation window must satisfy 1 <= n0 <= n1 <= n-1");
    if (!options.exhaustive && options.replicates < 100) throw config_error("permutation test requires B >= 100");

    const MomentTables tab(moments, g);
    PermutationResult res;
    res.seed = options.seed;
    res.exhaustive = options.exhaustive;
    res.n0 = n0;
    res.n1 = n1;

    std::vector<ReplicateMaxes> all;
    if (options.exhaustive) {
        if (n > 9) throw config_error("exhaustive permutation null is limited to n <= 9");
        std::vector<int> position(n);
        std::iota(position.begin(), position.end(), 1);
        do {
            all.push_back(scan_maxes(edge_count_profile(g, position), tab, n0, n1));
        } while (std::next_permutation(position.begin(), position.end()));
    } else {
        const int B = options.replicates;
        all.resize(B);
        int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
        threads = std::clamp(threads, 1, 32);
        auto run_block = [&](int lo, int hi) {
            std::vector<int> position(n);
            for (int r = lo; r < hi; ++r) {
                Philox rng(options.seed, streams::permutation_replicate + static_cast<std::uint64_t>(r));
                std::iota(position.begin(), position.end(), 1);
                for (int i = n - 1; i > 0; --i) {  // Fisher-Yates
                    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
                    std::swap(position[i], position[j]);
                }
                all[r] = scan_maxes(edge_count_profile(g, position), tab, n0, n1);
            }
        };
        if (threads == 1 || B < 256) {
            run_block(0, B);
        } else {
            std::vector<std::thread> pool;
            for (int tix = 0; tix < threads; ++tix)
                pool.emplace_back(run_block, B * tix / threads, B * (tix + 1) / threads);
            for (auto& th : pool) th.join();
        }
    }

    res.replicates = static_cast<std::int64_t>(all.size());
    auto collect = [&](auto member, std::vector<double>& dst) {
        dst.reserve(all.size());
        for (const auto& mx : all) dst.push_back(mx.*member);
        std::sort(dst.begin(), dst.end());
    };
    collect(&ReplicateMaxes::combined, res.null_max_combined);
    collect(&ReplicateMaxes::w, res.null_max_out_w);
    collect(&ReplicateMaxes::d, res.null_max_out_d);
    collect(&ReplicateMaxes::in, res.null_max_in);
    collect(&ReplicateMaxes::tilde, res.null_max_tilde);
    return res;
}

namespace {

const std::vector<double>& channel_stats(const PermutationResult& r, Channel c) {
    switch (c) {
        case Channel::combined: return r.null_max_combined;
        case Channel::out_w: return r.null_max_out_w;
        case Channel::out_d: return r.null_max_out_d;
        case Channel::in: return r.null_max_in;
        case Channel::in_tilde: return r.null_max_tilde;
    }
    throw config_error("bad channel");
}

}  // namespace

double PermutationResult::p_value(double observed, Channel channel) const {
    const auto& stats = channel_stats(*this, channel);
    const auto it = std::lower_bound(stats.begin(), stats.end(), observed);
    const auto ge = static_cast<std::int64_t>(stats.end() - it);
    return static_cast<double>(1 + ge) / static_cast<double>(stats.size() + 1);
}

double PermutationResult::critical_value(double alpha, Channel channel) const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("alpha must lie in (0, 1)");
    const auto& stats = channel_stats(*this, channel);
    if (stats.empty()) throw config_error("empty permutation null");
    const double h = (static_cast<double>(stats.size()) - 1.0) * (1.0 - alpha);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= stats.size()) return stats.back();
    return stats[lo] + (h - static_cast<double>(lo)) * (stats[lo + 1] - stats[lo]);
}

}  // namespace rmcpd
