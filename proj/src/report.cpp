#include "rmcpd/report.hpp"

#include <sstream>

#include "rmcpd/version.hpp"

namespace rmcpd {

json report_header(const std::string& command, std::uint64_t seed) {
    json j;
    j["tool"] = "rmcpd";
    j["version"] = version;
    j["command"] = command;
    j["seed"] = seed;
    return j;
}

namespace {

json channel_json(const ChannelSummary& cs) {
    json j;
    j["enabled"] = cs.enabled;
    if (!cs.enabled) return j;
    j["z_at_tau"] = cs.z_at_tau;
    j["max"] = cs.max_stat;
    j["argmax"] = cs.argmax;
    j["p_analytic"] = cs.p_analytic;
    j["p_raw"] = cs.p_raw;
    j["dropped_nodes"] = cs.dropped_nodes;
    j["fell_back_a1"] = cs.fell_back_a1;
    if (cs.p_permutation) j["p_permutation"] = *cs.p_permutation;
    return j;
}

json detect_body(const DetectResult& res) {
    json j;
    j["data"] = {{"n", res.n}, {"ell", res.ell}, {"d", res.d}};
    j["graph"] = {{"k", res.k},
                  {"edges", res.graph_edges},
                  {"g_out", res.g_out},
                  {"g_in", res.g_in},
                  {"varrho", res.varrho},
                  {"varrho_degenerate", res.varrho_degenerate}};
    j["scan"] = {{"window", {res.n0, res.n1}},
                 {"tau_hat", res.tau_hat},
                 {"m_star", res.m_star},
                 {"tilde_in_max", res.tilde_in_max}};
    j["channels"] = {{"out_w", channel_json(res.out_w)},
                     {"out_d", channel_json(res.out_d)},
                     {"in_tilde", channel_json(res.in_tilde)}};
    json test;
    test["alpha"] = res.alpha;
    test["correction"] = to_string(res.correction);
    test["p_m"] = res.p_m;
    if (res.p_m_permutation) test["p_m_permutation"] = *res.p_m_permutation;
    test["reject"] = res.reject;
    j["test"] = test;
    j["warnings"] = res.warnings;
    return j;
}

}  // namespace

json detect_report(const DetectResult& res, std::uint64_t seed) {
    json j = report_header("detect", seed);
    j.update(detect_body(res));
    return j;
}

json segmentation_report(const SegmentationResult& res, const DetectResult* top, std::uint64_t seed) {
    json j = report_header("segment", seed);
    if (top != nullptr) j["data"] = {{"n", top->n}, {"ell", top->ell}, {"d", top->d}};
    json cps = json::array();
    for (const auto& cp : res.change_points)
        cps.push_back({{"position", cp.position},
                       {"p_m", cp.p_m},
                       {"p_out_w", cp.p_out_w},
                       {"p_out_d", cp.p_out_d},
                       {"p_in_tilde", cp.p_in_tilde}});
    j["change_points"] = cps;
    json tree = json::array();
    for (const auto& d : res.tree) {
        json node;
        node["lo"] = d.lo;
        node["hi"] = d.hi;
        node["depth"] = d.depth;
        node["tested"] = d.tested;
        if (!d.tested) {
            node["skip_reason"] = d.skip_reason;
        } else {
            node["alpha_used"] = d.alpha_used;
            node["p_m"] = d.p_m;
            node["tau"] = d.tau_abs;
            node["significant"] = d.significant;
        }
        tree.push_back(node);
    }
    j["tree"] = tree;
    return j;
}

json critical_value_report(int n, int n0, int n1, double alpha,
                           const std::vector<std::pair<std::string, json>>& tables, std::uint64_t seed) {
    json j = report_header("critical-values", seed);
    j["n"] = n;
    j["window"] = {n0, n1};
    j["alpha"] = alpha;
    for (const auto& [name, table] : tables) j[name] = table;
    return j;
}

json simulate_report(const SimulateOptions& options, const std::vector<SettingPower>& table) {
    json j = report_header("simulate", options.seed);
    j["family"] = to_string(options.family);
    j["n"] = options.n;
    j["ell"] = options.ell;
    j["d"] = options.d;
    j["tau"] = options.tau;
    j["replicates"] = options.replicates;
    j["alpha"] = options.test.alpha;
    j["localization_halfwidth"] = options.localization_halfwidth;
    json rows = json::array();
    for (const auto& sp : table) {
        json row;
        row["setting"] = sp.setting;
        row["replicates"] = sp.replicates;
        row["rejections"] = sp.rejections;
        row["localized"] = sp.localized;
        json outs = json::array();
        for (const auto& o : sp.outcomes)
            outs.push_back({{"replicate", o.replicate},
                            {"seed", o.seed},
                            {"p_m", o.p_m},
                            {"tau_hat", o.tau_hat},
                            {"reject", o.reject},
                            {"localized", o.localized}});
        row["outcomes"] = outs;
        rows.push_back(row);
    }
    j["settings"] = rows;
    return j;
}

std::string to_csv(const std::vector<SettingPower>& table) {
    std::ostringstream out;
    out << "setting,replicate,seed,p_m,tau_hat,reject,localized\n";
    char buf[64];
    for (const auto& sp : table)
        for (const auto& o : sp.outcomes) {
            std::snprintf(buf, sizeof buf, "%.17g", o.p_m);
            out << o.setting << ',' << o.replicate << ',' << o.seed << ',' << buf << ',' << o.tau_hat << ','
                << (o.reject ? 1 : 0) << ',' << (o.localized ? 1 : 0) << '\n';
        }
    return out.str();
}

}  // namespace rmcpd
