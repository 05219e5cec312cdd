#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rmcpd/counts.hpp"
#include "rmcpd/errors.hpp"
#include <numeric>

#include "rmcpd/permutation.hpp"
#include "rmcpd/rng.hpp"
#include "rmcpd/scan.hpp"

using namespace rmcpd;

TEST_CASE("smoothed p-value bounds") {
    const SimilarityGraph g = testing::small_graph(12, 2, 2, 3);
    const MomentContext mc(g);
    PermutationOptions opt;
    opt.replicates = 500;
    opt.seed = 11;
    const PermutationResult r = permutation_test(g, mc, 1, 11, opt);
    CHECK(r.p_value(-100.0) == 1.0);                       // observed below every replicate
    CHECK(r.p_value(1e9) == doctest::Approx(1.0 / 501.0)); // observed above every replicate
    CHECK(r.replicates == 500);
}

TEST_CASE("deterministic in the seed and schedule independent") {
    const SimilarityGraph g = testing::small_graph(20, 2, 3, 5);
    const MomentContext mc(g);
    PermutationOptions a;
    a.replicates = 400;
    a.seed = 42;
    a.threads = 1;
    PermutationOptions b = a;
    b.threads = 4;
    const PermutationResult ra = permutation_test(g, mc, 1, 19, a);
    const PermutationResult rb = permutation_test(g, mc, 1, 19, b);
    CHECK(ra.null_max_combined == rb.null_max_combined);
    CHECK(ra.null_max_out_w == rb.null_max_out_w);
    const PermutationResult rc = permutation_test(g, mc, 1, 19, a);
    CHECK(ra.null_max_combined == rc.null_max_combined);
    PermutationOptions othersd = a;
    othersd.seed = 43;
    CHECK(permutation_test(g, mc, 1, 19, othersd).null_max_combined != ra.null_max_combined);
}

TEST_CASE("analytic moments are invariant to individual relabeling") {
    const SimilarityGraph g = testing::small_graph(10, 2, 2, 8);
    const MomentContext base(g);
    Philox rng(99, 0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<int> perm(g.n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = g.n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
        SimilarityGraph relabeled = g;
        for (auto& u : relabeled.individual_of) u = perm[u];
        const MomentContext mc(decompose(relabeled.node_count, relabeled.edges, relabeled.individual_of));
        CHECK(mc.varrho() == doctest::Approx(base.varrho()).epsilon(1e-13));
        for (int t : {2, 5, 8}) {
            const MomentSet x = base.at(t), y = mc.at(t);
            CHECK(x.mu_out_w == doctest::Approx(y.mu_out_w).epsilon(1e-13));
            CHECK(x.sigma_out_w == doctest::Approx(y.sigma_out_w).epsilon(1e-13));
            CHECK(x.sigma_out_d == doctest::Approx(y.sigma_out_d).epsilon(1e-13));
            CHECK(x.sigma_in == doctest::Approx(y.sigma_in).epsilon(1e-13));
            CHECK(x.gamma_out_w == doctest::Approx(y.gamma_out_w).epsilon(1e-10));
        }
    }
}

TEST_CASE("monte carlo agrees with the exhaustive null at n = 6") {
    const SimilarityGraph g = testing::small_graph(6, 2, 2, 21);
    const MomentContext mc(g);
    PermutationOptions ex;
    ex.exhaustive = true;
    const PermutationResult exact = permutation_test(g, mc, 1, 5, ex);
    CHECK(exact.replicates == 720);

    PermutationOptions milli;
    milli.replicates = 50000;
    milli.seed = 17;
    const PermutationResult mcarlo = permutation_test(g, mc, 1, 5, milli);
    for (double obs : {1.0, 1.5, 2.0, 2.5}) {
        CHECK(std::abs(exact.p_value(obs) - mcarlo.p_value(obs)) < 0.01);
    }
    CHECK(std::abs(exact.critical_value(0.05) - mcarlo.critical_value(0.05)) < 0.05);
}

TEST_CASE("out_w permutation critical value near its reference band" * doctest::timeout(600)) {
    // Published values for this configuration lie around 3.43-3.48.
    const PanelDataset ds = testing::small_panel(200, 5, 50, 1618);
    const SimilarityGraph g = build_similarity_graph(ds, 9);
    const MomentContext mc(g);
    PermutationOptions opt;
    opt.replicates = 4000;
    opt.seed = 99;
    const PermutationResult r = permutation_test(g, mc, 10, 190, opt);
    const double cv = r.critical_value(0.05, Channel::out_w);
    CHECK(cv > 3.3);
    CHECK(cv < 3.65);
}

TEST_CASE("type-7 quantile definition") {
    PermutationResult r;
    r.null_max_combined = {1.0, 2.0, 3.0, 4.0, 5.0};
    r.replicates = 5;
    CHECK(r.critical_value(0.05) == doctest::Approx(4.8));   // h = 3.8
    CHECK(r.critical_value(0.5) == doctest::Approx(3.0));
    CHECK_THROWS_AS(r.critical_value(0.0), config_error);
}

TEST_CASE("option validation") {
    const SimilarityGraph g = testing::small_graph(6, 1, 1, 2);
    const MomentContext mc(g);
    PermutationOptions opt;
    opt.replicates = 50;
    CHECK_THROWS_AS(permutation_test(g, mc, 1, 5, opt), config_error);  // B too small
    opt.replicates = 100;
    CHECK_THROWS_AS(permutation_test(g, mc, 0, 5, opt), config_error);
    const SimilarityGraph big = testing::small_graph(10, 1, 1, 2);
    const MomentContext mcb(big);
    PermutationOptions ex;
    ex.exhaustive = true;
    CHECK_THROWS_AS(permutation_test(big, mcb, 1, 9, ex), config_error);  // n > 9
}
