// Command-line front end: detect / segment / critical-values / simulate.
// Exit codes: 0 ok, 1 statistical degeneracy under --strict, 2 input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rmcpd/counts.hpp"
#include "rmcpd/detect.hpp"
#include "rmcpd/errors.hpp"
#include "rmcpd/graph.hpp"
#include "rmcpd/report.hpp"
#include "rmcpd/scan.hpp"
#include "rmcpd/segmentation.hpp"
#include "rmcpd/simulate.hpp"
#include "rmcpd/version.hpp"

namespace {

using rmcpd::json;

struct CommonArgs {
    std::string input;
    int n = 0, ell = 0;
    int k = 9;
    double n0_frac = 0.05, n1_frac = 0.95;
    double alpha = 0.05;
    std::string correction = "A2";
    int permutations = 0;
    std::uint64_t seed = 0;
    std::string output;
    std::string format = "json";
    bool strict = false;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool needs_input) {
    auto* in = cmd->add_option("-i,--input", a.input, "input panel CSV");
    cmd->add_option("-n,--n", a.n, "number of individuals");
    cmd->add_option("-l,--ell", a.ell, "repeated measures per individual");
    if (needs_input) {
        in->required();
        cmd->get_option("--n")->required();
        cmd->get_option("--ell")->required();
    }
    cmd->add_option("-k,--k", a.k, "graph density (k-MST)")->capture_default_str();
    cmd->add_option("--n0-frac", a.n0_frac, "lower scan-window fraction")->capture_default_str();
    cmd->add_option("--n1-frac", a.n1_frac, "upper scan-window fraction")->capture_default_str();
    cmd->add_option("-a,--alpha", a.alpha, "significance level")->capture_default_str();
    cmd->add_option("-c,--correction", a.correction, "A1 or A2")->capture_default_str();
    cmd->add_option("-B,--permutations", a.permutations, "permutation replicates (0 = analytic only)")
        ->capture_default_str();
    cmd->add_option("-s,--seed", a.seed, "RNG seed")->capture_default_str();
    cmd->add_option("-o,--output", a.output, "write report to file instead of stdout");
    cmd->add_option("-f,--format", a.format, "json or csv (simulate only)")->capture_default_str();
    cmd->add_flag("--strict", a.strict, "treat statistical degeneracy warnings as failure (exit 1)");
    cmd->add_option("--threads", a.threads, "worker threads (0 = auto)")->capture_default_str();
}

rmcpd::TestOptions test_options(const CommonArgs& a) {
    rmcpd::TestOptions t;
    t.k = a.k;
    t.n0_frac = a.n0_frac;
    t.n1_frac = a.n1_frac;
    t.alpha = a.alpha;
    t.correction = a.correction == "A1" ? rmcpd::Correction::A1 : rmcpd::Correction::A2;
    if (a.correction != "A1" && a.correction != "A2") throw rmcpd::config_error("correction must be A1 or A2");
    t.permutations = a.permutations;
    t.seed = a.seed;
    t.threads = a.threads;
    return t;
}

void emit(const CommonArgs& a, const std::string& text) {
    if (a.output.empty()) {
        std::cout << text << '\n';
    } else {
        std::ofstream out(a.output);
        if (!out) throw rmcpd::data_error("cannot open output file: " + a.output);
        out << text << '\n';
    }
}

int finish(const CommonArgs& a, const std::vector<std::string>& warnings) {
    if (a.strict && !warnings.empty()) {
        for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
        return 1;
    }
    return 0;
}

int cmd_detect(const CommonArgs& a, const std::string& export_graph) {
    const rmcpd::PanelDataset ds = rmcpd::load_panel_csv(a.input, a.n, a.ell);
    if (!export_graph.empty()) {
        const auto g = rmcpd::build_similarity_graph(ds, std::min<int>(a.k, ds.node_count() / 2), a.threads);
        std::ofstream out(export_graph);
        if (!out) throw rmcpd::data_error("cannot open graph export file: " + export_graph);
        rmcpd::write_edge_list(g, out);
    }
    const rmcpd::DetectResult res = rmcpd::run_detect(ds, test_options(a));
    emit(a, rmcpd::detect_report(res, a.seed).dump(2));
    return finish(a, res.warnings);
}

int cmd_segment(const CommonArgs& a, int min_seg, bool bonferroni) {
    const rmcpd::PanelDataset ds = rmcpd::load_panel_csv(a.input, a.n, a.ell);
    rmcpd::SegmentationOptions opt;
    opt.test = test_options(a);
    opt.min_seg = min_seg;
    opt.bonferroni = bonferroni;
    const rmcpd::SegmentationResult res = rmcpd::binary_segmentation(ds, opt);
    rmcpd::DetectResult top;
    top.n = ds.n;
    top.ell = ds.ell;
    top.d = ds.d;
    emit(a, rmcpd::segmentation_report(res, &top, a.seed).dump(2));
    return 0;
}

int cmd_critical_values(const CommonArgs& a, const std::string& family, int setting, int d) {
    using rmcpd::Channel;
    const rmcpd::TestOptions topt = test_options(a);
    if (a.n < 4) throw rmcpd::config_error("critical-values requires --n >= 4");
    const auto [n0, n1] = topt.window(a.n);

    static constexpr Channel kChannels[] = {Channel::out_w, Channel::out_d, Channel::in, Channel::in_tilde};
    json a1;
    for (Channel c : kChannels)
        a1[to_string(c)] = rmcpd::critical_value(a.alpha, c, rmcpd::Correction::A1, a.n, n0, n1);
    std::vector<std::pair<std::string, json>> tables{{"a1", a1}};

    // A2 and permutation columns need data: either a CSV or a generator spec.
    std::optional<rmcpd::PanelDataset> ds;
    if (!a.input.empty()) {
        ds = rmcpd::load_panel_csv(a.input, a.n, a.ell);
    } else if (!family.empty()) {
        if (a.ell < 1 || d < 1) throw rmcpd::config_error("generator spec needs --ell and --d");
        const auto cfg = rmcpd::GeneratorConfig::study_setting(rmcpd::family_from_string(family), setting, d,
                                                               /*tau=*/0, a.seed);
        ds = rmcpd::generate(cfg, a.n, a.ell, d);
    }
    std::vector<std::string> warnings;
    if (ds) {
        const auto graph = rmcpd::build_similarity_graph(*ds, std::min<int>(topt.k, ds->node_count() / 2), a.threads);
        const rmcpd::MomentContext moments(graph);
        json a2;
        for (Channel c : kChannels)
            a2[to_string(c)] = rmcpd::critical_value(a.alpha, c, rmcpd::Correction::A2, a.n, n0, n1, &moments);
        tables.emplace_back("a2", a2);
        if (a.permutations > 0) {
            rmcpd::PermutationOptions popt;
            popt.replicates = a.permutations;
            popt.seed = a.seed;
            popt.threads = a.threads;
            const auto perm = rmcpd::permutation_test(graph, moments, n0, n1, popt);
            json pj;
            for (Channel c : kChannels) pj[to_string(c)] = perm.critical_value(a.alpha, c);
            pj["combined"] = perm.critical_value(a.alpha, Channel::combined);
            tables.emplace_back("permutation", pj);
        }
        if (moments.varrho_degenerate()) warnings.push_back("degenerate varrho on the supplied data");
    }
    emit(a, rmcpd::critical_value_report(a.n, n0, n1, a.alpha, tables, a.seed).dump(2));
    return finish(a, warnings);
}

int cmd_simulate(const CommonArgs& a, const std::string& family, std::vector<int> settings, int d, int tau,
                 int replicates, const std::string& checkpoint) {
    rmcpd::SimulateOptions opt;
    opt.family = rmcpd::family_from_string(family);
    if (!settings.empty()) opt.settings = std::move(settings);
    opt.n = a.n > 0 ? a.n : 100;
    opt.ell = a.ell > 0 ? a.ell : 5;
    opt.d = d;
    opt.tau = tau > 0 ? tau : opt.n / 2;
    opt.replicates = replicates;
    opt.test = test_options(a);
    opt.seed = a.seed;
    opt.checkpoint = checkpoint;
    const auto table = rmcpd::run_power_study(opt);
    if (a.format == "csv")
        emit(a, rmcpd::to_csv(table));
    else
        emit(a, rmcpd::simulate_report(opt, table).dump(2));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph-based change-point detection for multivariate repeated measures"};
    app.set_version_flag("--version", std::string("rmcpd ") + rmcpd::version);
    app.require_subcommand(1);

    CommonArgs da, sa, ca, ma;
    std::string export_graph;
    auto* detect = app.add_subcommand("detect", "test for a single change-point");
    add_common(detect, da, true);
    detect->add_option("--export-graph", export_graph, "write the similarity graph edge list to a file");

    int min_seg = 0;
    bool bonferroni = false;
    auto* segment = app.add_subcommand("segment", "recursive binary segmentation");
    add_common(segment, sa, true);
    segment->add_option("--min-seg", min_seg, "minimum testable segment length (0 = auto)");
    segment->add_flag("--bonferroni", bonferroni, "halve alpha per recursion depth");

    std::string cv_family;
    int cv_setting = 1, cv_d = 0;
    auto* critical = app.add_subcommand("critical-values", "analytic and permutation critical values");
    add_common(critical, ca, false);
    critical->add_option("--family", cv_family, "generator family for the A2/permutation columns");
    critical->add_option("--setting", cv_setting, "generator setting 1..4")->capture_default_str();
    critical->add_option("-d,--dim", cv_d, "generator dimension");

    std::string sim_family = "gaussian", checkpoint;
    std::vector<int> sim_settings;
    int sim_d = 40, sim_tau = 0, sim_r = 100;
    auto* simulate = app.add_subcommand("simulate", "power study over generator settings");
    add_common(simulate, ma, false);
    simulate->add_option("--family", sim_family, "gaussian | lognormal | gaussian_mixture")->capture_default_str();
    simulate->add_option("--settings", sim_settings, "settings to run (default 1 2 3 4)");
    simulate->add_option("-d,--dim", sim_d, "dimension")->capture_default_str();
    simulate->add_option("--tau", sim_tau, "true change-point (0 = n/2)")->capture_default_str();
    simulate->add_option("-R,--replicates", sim_r, "replicates per setting")->capture_default_str();
    simulate->add_option("--checkpoint", checkpoint, "append-only per-replicate CSV; resumes if it exists");

    try {
        app.parse(argc, argv);
        if (detect->parsed()) return cmd_detect(da, export_graph);
        if (segment->parsed()) return cmd_segment(sa, min_seg, bonferroni);
        if (critical->parsed()) return cmd_critical_values(ca, cv_family, cv_setting, cv_d);
        if (simulate->parsed()) return cmd_simulate(ma, sim_family, sim_settings, sim_d, sim_tau, sim_r, checkpoint);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 2;
    } catch (const rmcpd::data_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const rmcpd::config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
