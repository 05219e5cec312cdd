#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "rmcpd/counts.hpp"
#include "rmcpd/enumeration.hpp"
#include "rmcpd/errors.hpp"
#include "rmcpd/moments.hpp"
#include "rmcpd/rng.hpp"

using namespace rmcpd;

namespace {

struct Corpus {
    int n, ell, k;
    std::uint64_t seed;
};

double var_of(double e2, double e1) { return e2 - e1 * e1; }

}  // namespace

TEST_CASE("lemma-1 closed forms at textbook inputs") {
    GraphAggregates a;
    a.n = 10;
    a.g = 20;
    MomentContext ten(a);
    CHECK(ten.lemma1(4).e_in == doctest::Approx(8.0));  // (t/n)|G_in|

    GraphAggregates b;
    b.n = 5;
    b.m = 10;
    MomentContext five(b);
    CHECK(five.lemma1(2).e_out1 == doctest::Approx(1.0));  // t(t-1)/(n(n-1)) |G_out|
}

TEST_CASE("path graph over four individuals") {
    std::vector<std::int32_t> ind = {0, 1, 2, 3};
    const SimilarityGraph g = decompose(4, {{0, 1}, {1, 2}, {2, 3}}, ind);
    const MomentContext mc(g);
    CHECK(mc.lemma1(2).e_out1 == doctest::Approx(0.5));  // (2*1)/(4*3) * 3
    const RawMoments exact = enumerate_null_moments(g, 2, 3);
    CHECK(exact.r1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mc.raw(2).r1r1 == doctest::Approx(exact.r1r1).epsilon(1e-12));
}

TEST_CASE("no within edges means zero within moments") {
    std::vector<std::int32_t> ind = {0, 1, 2};
    const SimilarityGraph g = decompose(3, {{0, 1}, {1, 2}}, ind);
    CHECK(g.g_in == 0);
    const ExactMoments exact = enumerate_null_moments(g);
    CHECK(exact.at(1).rin == 0.0);
    CHECK(exact.at(2).rinrin == 0.0);
}

TEST_CASE("analytic raw moments match exhaustive enumeration") {
    for (const auto& c : {Corpus{5, 2, 2, 7}, Corpus{6, 2, 1, 8}, Corpus{6, 3, 2, 9}, Corpus{7, 1, 2, 10},
                          Corpus{4, 3, 2, 11}}) {
        const SimilarityGraph g = testing::small_graph(c.n, c.ell, c.k, c.seed);
        const MomentContext mc(g);
        const ExactMoments exact = enumerate_null_moments(g);
        for (int t = 1; t <= c.n - 1; ++t) {
            const RawMoments an = mc.raw(t);
            const RawMoments ex = exact.at(t);
            const double pairs[][2] = {
                {an.r1, ex.r1},           {an.r2, ex.r2},           {an.rin, ex.rin},
                {an.r1r1, ex.r1r1},       {an.r2r2, ex.r2r2},       {an.r1r2, ex.r1r2},
                {an.rinrin, ex.rinrin},   {an.rinr1, ex.rinr1},     {an.rinr2, ex.rinr2},
                {an.r1c, ex.r1c},         {an.r2c, ex.r2c},         {an.r1r1r2, ex.r1r1r2},
                {an.r1r2r2, ex.r1r2r2},   {an.rinc, ex.rinc},       {an.rin2r1, ex.rin2r1},
                {an.rin2r2, ex.rin2r2},   {an.rinr1r1, ex.rinr1r1}, {an.rinr2r2, ex.rinr2r2},
                {an.rinr1r2, ex.rinr1r2}};
            for (const auto& pr : pairs) CHECK(std::abs(pr[0] - pr[1]) <= 1e-10);
        }
    }
}

TEST_CASE("lemma-1 displays agree with the raw-moment route") {
    const SimilarityGraph g = testing::small_graph(9, 2, 3, 77);
    const MomentContext mc(g);
    for (int t = 1; t <= 8; ++t) {
        const Lemma1Moments l = mc.lemma1(t);
        const RawMoments r = mc.raw(t);
        CHECK(l.e_out1 == doctest::Approx(r.r1).epsilon(1e-12));
        CHECK(l.e_out2 == doctest::Approx(r.r2).epsilon(1e-12));
        CHECK(l.e_in == doctest::Approx(r.rin).epsilon(1e-12));
        CHECK(std::abs(l.var_out1 - var_of(r.r1r1, r.r1)) <= 1e-10);
        CHECK(std::abs(l.var_out2 - var_of(r.r2r2, r.r2)) <= 1e-10);
        CHECK(std::abs(l.var_in - var_of(r.rinrin, r.rin)) <= 1e-10);
        CHECK(std::abs(l.cov_out12 - (r.r1r2 - r.r1 * r.r2)) <= 1e-10);
        CHECK(std::abs(l.cov_out1_in - (r.rinr1 - r.rin * r.r1)) <= 1e-10);
        CHECK(std::abs(l.cov_out2_in - (r.rinr2 - r.rin * r.r2)) <= 1e-10);
    }
}

TEST_CASE("varrho equals the enumeration correlation and is t-invariant") {
    const SimilarityGraph g = testing::small_graph(6, 2, 2, 31);
    const MomentContext mc(g);
    REQUIRE_FALSE(mc.varrho_degenerate());
    CHECK(std::abs(mc.varrho()) <= 1.0);
    const ExactMoments exact = enumerate_null_moments(g);
    for (int t = 1; t <= 5; ++t) {
        const RawMoments ex = exact.at(t);
        const double sd_d = std::sqrt(var_of(ex.r1r1, ex.r1) + var_of(ex.r2r2, ex.r2) - 2 * (ex.r1r2 - ex.r1 * ex.r2));
        const double sd_in = std::sqrt(var_of(ex.rinrin, ex.rin));
        const double cov = (ex.rinr1 - ex.rinr2) - ex.rin * (ex.r1 - ex.r2);
        CHECK(mc.varrho() == doctest::Approx(cov / (sd_d * sd_in)).epsilon(1e-10));
    }
}

TEST_CASE("degenerate varrho flag on a fully regular graph") {
    // Ring over 4 individuals (all D_u equal) with one within edge each.
    std::vector<std::int32_t> ind = {0, 0, 1, 1, 2, 2, 3, 3};
    const SimilarityGraph g =
        decompose(8, {{0, 2}, {2, 4}, {4, 6}, {6, 0}, {0, 1}, {2, 3}, {4, 5}, {6, 7}}, ind);
    const MomentContext mc(g);
    CHECK(mc.varrho_degenerate());
    const MomentSet ms = mc.at(2);
    CHECK_FALSE(ms.tilde_ok);
    CHECK_FALSE(ms.out_d_ok);  // Var(R_out,d) is zero too on this graph
}

TEST_CASE("gamma symmetries under time reversal") {
    const SimilarityGraph g = testing::small_graph(8, 2, 2, 62);
    const MomentContext mc(g);
    for (int t = 2; t <= 6; ++t) {
        const MomentSet a = mc.at(t);
        const MomentSet b = mc.at(8 - t);
        CHECK(std::abs(a.gamma_out_d + b.gamma_out_d) <= 1e-9);
        CHECK(std::abs(a.gamma_in + b.gamma_in) <= 1e-9);
        CHECK(std::abs(a.gamma_out_w - b.gamma_out_w) <= 1e-9);
    }
}

TEST_CASE("standardized skewness matches enumeration") {
    const SimilarityGraph g = testing::small_graph(6, 2, 2, 5);
    const MomentContext mc(g);
    const ExactMoments exact = enumerate_null_moments(g);
    for (int t = 2; t <= 4; ++t) {
        const RawMoments ex = exact.at(t);
        const MomentSet ms = mc.at(t);
        const double mu = ex.rin, va = var_of(ex.rinrin, ex.rin);
        const double gamma_exact = (ex.rinc - 3 * mu * va - mu * mu * mu) / std::pow(va, 1.5);
        CHECK(std::abs(ms.gamma_in - gamma_exact) <= 1e-9);
    }
}

TEST_CASE("weighted statistic is right-skewed near the ends") {
    const PanelDataset ds = testing::small_panel(300, 2, 50, 404);
    const SimilarityGraph g = build_similarity_graph(ds, 1);  // plain MST
    const MomentContext mc(g);
    CHECK(mc.at(15).gamma_out_w > 0.0);
    CHECK(mc.at(285).gamma_out_w > 0.0);
}

TEST_CASE("size guards") {
    std::vector<std::int32_t> tiny = {0, 1, 2};
    const SimilarityGraph g3 = decompose(3, {{0, 1}}, tiny);
    CHECK_THROWS_AS(MomentContext{g3}, config_error);

    const SimilarityGraph big = testing::small_graph(9, 1, 1, 2);
    CHECK_THROWS_AS(enumerate_null_moments(big), config_error);
    const SimilarityGraph ok = testing::small_graph(5, 1, 1, 2);
    CHECK_THROWS_AS(enumerate_null_moments(ok, 0, 3), config_error);  // t out of range
}

// Monte-Carlo cross-check of the closed-form skewness at a size where
// exhaustive enumeration is infeasible.
TEST_CASE("analytic skewness matches a permutation sample at n = 60" * doctest::timeout(300)) {
    const SimilarityGraph g = testing::small_graph(60, 3, 9, 808, 8);
    const MomentContext mc(g);
    const int B = 100000;
    const int n = 60;
    std::vector<int> pos(n);
    std::vector<double> zw3(3, 0.0), zd3(3, 0.0), zi3(3, 0.0);
    const int ts[3] = {6, 30, 54};
    Philox rng(5150, 0);
    for (int b = 0; b < B; ++b) {
        std::iota(pos.begin(), pos.end(), 1);
        for (int i = n - 1; i > 0; --i) std::swap(pos[i], pos[rng.below(i + 1)]);
        const EdgeCountProfile p = edge_count_profile(g, pos);
        for (int j = 0; j < 3; ++j) {
            const int t = ts[j];
            const MomentSet ms = mc.at(t);
            const double al = static_cast<double>(n - t - 1) / (n - 2), be = static_cast<double>(t - 1) / (n - 2);
            const double zw = (al * p.r_out1[t] + be * p.r_out2[t] - ms.mu_out_w) / ms.sigma_out_w;
            const double zd = (static_cast<double>(p.r_out1[t] - p.r_out2[t]) - ms.mu_out_d) / ms.sigma_out_d;
            const double zi = (static_cast<double>(p.r_in1[t]) - ms.mu_in) / ms.sigma_in;
            zw3[j] += zw * zw * zw;
            zd3[j] += zd * zd * zd;
            zi3[j] += zi * zi * zi;
        }
    }
    for (int j = 0; j < 3; ++j) {
        const MomentSet ms = mc.at(ts[j]);
        CHECK(std::abs(zw3[j] / B - ms.gamma_out_w) < 0.08);
        CHECK(std::abs(zd3[j] / B - ms.gamma_out_d) < 0.08);
        CHECK(std::abs(zi3[j] / B - ms.gamma_in) < 0.08);
    }
}
