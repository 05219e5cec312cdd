#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "rmcpd/counts.hpp"
#include "rmcpd/enumeration.hpp"
#include "rmcpd/errors.hpp"
#include "rmcpd/scan.hpp"

using namespace rmcpd;

TEST_CASE("standardized statistics have exact null mean 0 and variance 1") {
    // All 720 orderings of a 6-individual toy graph.
    const SimilarityGraph g = testing::small_graph(6, 2, 2, 44);
    const MomentContext mc(g);
    std::vector<int> pos(6);
    std::iota(pos.begin(), pos.end(), 1);
    std::vector<std::vector<double>> zw(6), zd(6), zi(6);
    do {
        const EdgeCountProfile p = edge_count_profile(g, pos);
        ScanProfile s = standardized_scans(p, mc);
        for (int t = 1; t <= 5; ++t) {
            if (!std::isnan(s.z_out_w[t])) zw[t].push_back(s.z_out_w[t]);
            if (!std::isnan(s.z_out_d[t])) zd[t].push_back(s.z_out_d[t]);
            if (!std::isnan(s.z_in[t])) zi[t].push_back(s.z_in[t]);
        }
    } while (std::next_permutation(pos.begin(), pos.end()));

    auto mean_var = [](const std::vector<double>& v) {
        double m = 0, q = 0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        for (double x : v) q += (x - m) * (x - m);
        return std::pair{m, q / static_cast<double>(v.size())};
    };
    for (int t = 2; t <= 4; ++t) {
        for (auto* channel : {&zw, &zd, &zi}) {
            REQUIRE((*channel)[t].size() == 720);
            const auto [m, v] = mean_var((*channel)[t]);
            CHECK(std::abs(m) < 1e-10);
            CHECK(std::abs(v - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("orthogonalization is a no-op when varrho is zero") {
    // D: pairs A-B x2, C-D x1; diagonal (2,1,1,2). varrho = 0 exactly.
    std::vector<std::int32_t> ind = {0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3};
    const SimilarityGraph g = decompose(
        12, {{0, 3}, {1, 4}, {6, 9}, {0, 1}, {1, 2}, {3, 4}, {6, 7}, {9, 10}, {10, 11}}, ind);
    const MomentContext mc(g);
    REQUIRE_FALSE(mc.varrho_degenerate());
    REQUIRE(mc.varrho() == doctest::Approx(0.0).epsilon(1e-14));
    const ScanProfile s = standardized_scans(edge_count_profile(g), mc);
    for (int t = 1; t <= 3; ++t)
        if (!std::isnan(s.z_in[t])) CHECK(s.z_in_tilde[t] == doctest::Approx(s.z_in[t]).epsilon(1e-12));
}

TEST_CASE("m is the pointwise maximum and dominates z_out_w") {
    const SimilarityGraph g = testing::small_graph(20, 2, 3, 12);
    const MomentContext mc(g);
    ScanProfile s = standardized_scans(edge_count_profile(g), mc);
    for (int t = 1; t <= 19; ++t) {
        if (std::isnan(s.m[t])) continue;
        double expect = -1e300;
        if (!std::isnan(s.z_out_w[t])) expect = std::max(expect, s.z_out_w[t]);
        if (!std::isnan(s.z_out_d[t])) expect = std::max(expect, std::abs(s.z_out_d[t]));
        if (!std::isnan(s.z_in_tilde[t])) expect = std::max(expect, std::abs(s.z_in_tilde[t]));
        CHECK(s.m[t] == expect);
        if (!std::isnan(s.z_out_w[t])) CHECK(s.m[t] >= s.z_out_w[t]);
    }
}

TEST_CASE("max_statistic tie-break and window") {
    ScanProfile s;
    s.n = 10;
    s.m.assign(10, 1.0);
    s.m[0] = std::nan("");
    SUBCASE("constant profile picks the window start") {
        const auto [tau, m] = max_statistic(s, 3, 8);
        CHECK(tau == 3);
        CHECK(m == 1.0);
    }
    SUBCASE("single peak") {
        s.m[6] = 2.5;
        const auto [tau, m] = max_statistic(s, 2, 9);
        CHECK(tau == 6);
        CHECK(m == 2.5);
    }
    SUBCASE("window validation") {
        CHECK_THROWS_AS(max_statistic(s, 0, 5), config_error);
        CHECK_THROWS_AS(max_statistic(s, 7, 6), config_error);
        CHECK_THROWS_AS(max_statistic(s, 5, 10), config_error);
    }
    SUBCASE("all NaN window") {
        for (auto& v : s.m) v = std::nan("");
        CHECK_THROWS_AS(max_statistic(s, 2, 9), numeric_error);
    }
}

TEST_CASE("pipeline is scale invariant") {
    const PanelDataset ds = testing::small_panel(15, 2, 4, 9);
    PanelDataset scaled = ds;
    for (auto& v : scaled.values) v *= 12.0;
    const SimilarityGraph g1 = build_similarity_graph(ds, 2);
    const SimilarityGraph g2 = build_similarity_graph(scaled, 2);
    const MomentContext m1(g1), m2(g2);
    ScanProfile s1 = standardized_scans(edge_count_profile(g1), m1);
    ScanProfile s2 = standardized_scans(edge_count_profile(g2), m2);
    const auto r1 = max_statistic(s1, 2, 13);
    const auto r2 = max_statistic(s2, 2, 13);
    CHECK(r1 == r2);
    for (int t = 1; t <= 14; ++t) {
        const bool nan1 = std::isnan(s1.m[t]);
        CHECK(nan1 == std::isnan(s2.m[t]));
        if (!nan1) CHECK(s1.m[t] == s2.m[t]);
    }
}

TEST_CASE("within channel disabled when there are no repeated measures") {
    const SimilarityGraph g = testing::small_graph(12, 1, 2, 3);
    REQUIRE(g.g_in == 0);
    const MomentContext mc(g);
    const ScanProfile s = standardized_scans(edge_count_profile(g), mc);
    CHECK_FALSE(s.tilde_enabled);
    REQUIRE_FALSE(s.warnings.empty());
    for (int t = 1; t <= 11; ++t) {
        CHECK(std::isnan(s.z_in_tilde[t]));
        if (std::isnan(s.m[t])) continue;
        double expect = -1e300;
        if (!std::isnan(s.z_out_w[t])) expect = std::max(expect, s.z_out_w[t]);
        if (!std::isnan(s.z_out_d[t])) expect = std::max(expect, std::abs(s.z_out_d[t]));
        CHECK(s.m[t] == expect);
    }
}
