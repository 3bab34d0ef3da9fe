#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "mrforge/analysis.hpp"
#include "mrforge/errors.hpp"
#include "mrforge/rng.hpp"

using namespace mrforge;
using analysis::SampleSet;

namespace {

SampleSet samples(std::string label, std::vector<double> values) {
    return {std::move(label), std::move(values)};
}

// Monte-Carlo dominated-volume oracle for 2-D minimization fronts.
double hv_monte_carlo(const std::vector<std::array<double, 2>>& front,
                      std::array<double, 2> ref, std::size_t n_samples, std::uint64_t seed) {
    SeededRng rng(seed);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < n_samples; ++s) {
        double x = rng.next_double() * ref[0];
        double y = rng.next_double() * ref[1];
        for (const auto& p : front) {
            if (p[0] <= x && p[1] <= y) {
                ++hits;
                break;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(n_samples) * ref[0] * ref[1];
}

// Exhaustive rank-assignment oracle for the MWU two-sided p value.
double mwu_enumeration_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    auto u_stat = [](const std::vector<double>& x, const std::vector<double>& y) {
        double u = 0.0;
        for (double xi : x) {
            for (double yj : y) {
                if (xi > yj)
                    u += 1.0;
                else if (xi == yj)
                    u += 0.5;
            }
        }
        return u;
    };
    std::vector<double> combined = a;
    combined.insert(combined.end(), b.begin(), b.end());
    const std::size_t n = a.size(), total = combined.size();
    double u_obs = u_stat(a, b);
    std::vector<bool> pick(total, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n), true);
    std::sort(pick.begin(), pick.end());  // lexicographic start for next_permutation
    double count = 0.0, lo = 0.0, hi = 0.0;
    do {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < total; ++i)
            (pick[i] ? xs : ys).push_back(combined[i]);
        if (xs.size() != n) continue;
        double u = u_stat(xs, ys);
        count += 1.0;
        if (u <= u_obs) lo += 1.0;
        if (u >= u_obs) hi += 1.0;
    } while (std::next_permutation(pick.begin(), pick.end()));
    return std::min(1.0, 2.0 * std::min(lo, hi) / count);
}

}  // namespace

TEST_CASE("hypervolume of a single point is the dominated rectangle") {
    CHECK(analysis::hypervolume({{0.5, 0.5}}, {1.0, 1.0}) == doctest::Approx(0.25));
    CHECK(analysis::hypervolume({}, {1.0, 1.0}) == 0.0);
}

TEST_CASE("hypervolume staircase matches the worked example") {
    double hv = analysis::hypervolume({{0.2, 0.8}, {0.8, 0.2}}, {1.0, 1.0});
    CHECK(hv == doctest::Approx(0.28));
}

TEST_CASE("dominated points contribute nothing") {
    double base = analysis::hypervolume({{0.2, 0.8}, {0.8, 0.2}}, {1.0, 1.0});
    double with_dominated =
        analysis::hypervolume({{0.2, 0.8}, {0.8, 0.2}, {0.85, 0.85}}, {1.0, 1.0});
    CHECK(base == doctest::Approx(with_dominated));
    // adding a non-dominated point grows the volume
    double grown = analysis::hypervolume({{0.2, 0.8}, {0.8, 0.2}, {0.4, 0.4}}, {1.0, 1.0});
    CHECK(grown > base);
}

TEST_CASE("points beyond the reference are rejected") {
    CHECK_THROWS_AS(analysis::hypervolume({{1.2, 0.5}}, {1.0, 1.0}),
                    PointBeyondReferenceError);
    // a point exactly on the reference contributes zero volume
    CHECK(analysis::hypervolume({{1.0, 1.0}}, {1.0, 1.0}) == 0.0);
}

TEST_CASE("hypervolume sweep agrees with Monte-Carlo estimation") {
    SeededRng rng(123);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n_points = 1 + rng.below(20);
        std::vector<std::array<double, 2>> front;
        for (std::size_t i = 0; i < n_points; ++i)
            front.push_back({rng.next_double(), rng.next_double()});
        double exact = analysis::hypervolume(front, {1.0, 1.0});
        double mc = hv_monte_carlo(front, {1.0, 1.0}, 200000, 1000 + trial);
        CHECK(std::abs(exact - mc) < 1e-2);
    }
}

TEST_CASE("kruskal-wallis separates shifted groups") {
    auto kw = analysis::kruskal_wallis({samples("a", {1, 2, 3}), samples("b", {100, 101, 102}),
                                        samples("c", {200, 201, 202})});
    // no ties: H = 7.2 exactly, p = exp(-3.6) for df=2
    CHECK(kw.H == doctest::Approx(7.2).epsilon(1e-12));
    CHECK(kw.p == doctest::Approx(0.02732372244729252).epsilon(1e-9));
    CHECK(kw.p < 0.05);
}

TEST_CASE("kruskal-wallis with ties matches the reference computation") {
    // frozen from scipy.stats.kruskal on the same data
    auto kw = analysis::kruskal_wallis({samples("a", {1.0, 2.0, 2.0, 3.0}),
                                        samples("b", {2.0, 4.0, 4.0, 5.0}),
                                        samples("c", {5.0, 6.0, 6.0, 7.0})});
    CHECK(kw.H == doctest::Approx(8.644265232974917).epsilon(1e-12));
    CHECK(kw.p == doctest::Approx(0.01327155021431969).epsilon(1e-9));
}

TEST_CASE("kruskal-wallis on identical groups reports no separation") {
    auto kw = analysis::kruskal_wallis(
        {samples("a", {5, 6, 7}), samples("b", {5, 6, 7}), samples("c", {5, 6, 7})});
    CHECK(kw.p > 0.9);
    // fully degenerate data: p = 1 by definition
    auto degenerate =
        analysis::kruskal_wallis({samples("a", {3, 3, 3}), samples("b", {3, 3, 3})});
    CHECK(degenerate.p == 1.0);
}

TEST_CASE("kruskal-wallis is invariant to within-group permutation") {
    std::vector<double> g1{3.2, 1.1, 4.4, 2.0};
    std::vector<double> g2{7.7, 5.5, 6.6, 8.8};
    auto kw1 = analysis::kruskal_wallis({samples("a", g1), samples("b", g2)});
    std::reverse(g1.begin(), g1.end());
    std::swap(g2[0], g2[3]);
    auto kw2 = analysis::kruskal_wallis({samples("a", g1), samples("b", g2)});
    CHECK(kw1.H == kw2.H);
    CHECK(kw1.p == kw2.p);
}

TEST_CASE("mann-whitney exact p on fully separated triples") {
    auto r = analysis::mann_whitney_u(samples("a", {1, 2, 3}), samples("b", {4, 5, 6}));
    CHECK(r.exact);
    CHECK(r.U == 0.0);
    CHECK(r.p == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("mann-whitney identical samples give p = 1 and symmetry holds") {
    auto r = analysis::mann_whitney_u(samples("a", {1, 2, 3}), samples("b", {1, 2, 3}));
    CHECK(r.p == doctest::Approx(1.0));
    SeededRng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a, b;
        for (int i = 0; i < 5; ++i) a.push_back(static_cast<double>(rng.below(8)));
        for (int i = 0; i < 6; ++i) b.push_back(static_cast<double>(rng.below(8)));
        auto ab = analysis::mann_whitney_u(samples("a", a), samples("b", b));
        auto ba = analysis::mann_whitney_u(samples("b", b), samples("a", a));
        CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-12));
    }
}

TEST_CASE("mann-whitney exact p equals full enumeration, ties included") {
    CHECK(mwu_enumeration_oracle({1, 2, 2, 3}, {2, 3, 4, 5}) == doctest::Approx(0.2));
    auto tied = analysis::mann_whitney_u(samples("a", {1, 2, 2, 3}), samples("b", {2, 3, 4, 5}));
    CHECK(tied.exact);
    CHECK(tied.p == doctest::Approx(0.2).epsilon(1e-12));

    SeededRng rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 1 + rng.below(6);
        std::size_t m = 1 + rng.below(6);
        std::vector<double> a, b;
        for (std::size_t i = 0; i < n; ++i) a.push_back(static_cast<double>(rng.below(6)));
        for (std::size_t i = 0; i < m; ++i) b.push_back(static_cast<double>(rng.below(6)));
        auto mine = analysis::mann_whitney_u(samples("a", a), samples("b", b));
        REQUIRE(mine.exact);
        double oracle = mwu_enumeration_oracle(a, b);
        CAPTURE(trial);
        CHECK(mine.p == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("mann-whitney normal approximation matches the reference beyond the cutoff") {
    // n = m = 21 (n*m = 441 > 400); frozen from scipy two-sided asymptotic
    std::vector<double> a{0.1,  0.5,  0.3,  0.9,  1.2,  0.7,  0.8,
                          1.1,  0.2,  0.4,  0.65, 0.35, 0.55, 0.75,
                          0.95, 1.05, 0.15, 0.25, 0.45, 0.85, 1.3};
    std::vector<double> b;
    for (double x : a) b.push_back(x + 0.4);
    auto r = analysis::mann_whitney_u(samples("a", a), samples("b", b));
    CHECK_FALSE(r.exact);
    CHECK(r.p == doctest::Approx(0.0019654073576221864).epsilon(1e-9));
}

TEST_CASE("dunn's test on identical groups is flat") {
    auto p = analysis::dunns_test(
        {samples("a", {1, 2, 3}), samples("b", {1, 2, 3}), samples("c", {1, 2, 3})});
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            if (i == j) continue;
            CHECK(p[i][j] > 0.9);
        }
    }
}

TEST_CASE("dunn's test flags well-separated groups, matrix symmetric") {
    std::vector<double> g1, g2, g3;
    for (int i = 1; i <= 10; ++i) {
        g1.push_back(i);
        g2.push_back(100 + i);
        g3.push_back(200 + i);
    }
    auto p = analysis::dunns_test({samples("a", g1), samples("b", g2), samples("c", g3)});
    // frozen from the standard mean-rank z formula
    CHECK(p[0][1] == doctest::Approx(0.011085166380602699).epsilon(1e-9));
    CHECK(p[0][2] == doctest::Approx(3.774247755487672e-07).epsilon(1e-9));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(p[i][j] == p[j][i]);
            if (i != j) CHECK(p[i][j] < 0.05);
        }
    }
}

TEST_CASE("vargha-delaney effect size and magnitude bands") {
    auto r = analysis::vargha_delaney_a(samples("a", {1, 2, 3}), samples("b", {4, 5, 6}));
    CHECK(r.a12 == 0.0);
    CHECK(r.magnitude == analysis::Magnitude::large);
    CHECK(r.direction == '<');

    auto tie = analysis::vargha_delaney_a(samples("a", {5}), samples("b", {5}));
    CHECK(tie.a12 == 0.5);
    CHECK(tie.magnitude == analysis::Magnitude::negligible);
    CHECK(tie.direction == '=');
}

TEST_CASE("a12 complement and monotone-transform invariance") {
    SeededRng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> a, b;
        for (int i = 0; i < 7; ++i) a.push_back(static_cast<double>(rng.below(10)));
        for (int i = 0; i < 9; ++i) b.push_back(static_cast<double>(rng.below(10)));
        auto ab = analysis::vargha_delaney_a(samples("a", a), samples("b", b));
        auto ba = analysis::vargha_delaney_a(samples("b", b), samples("a", a));
        CHECK(ab.a12 + ba.a12 == doctest::Approx(1.0));

        auto transform = [](std::vector<double> v) {
            for (double& x : v) x = std::exp(x) + 3.0;  // strictly monotone
            return v;
        };
        auto tr = analysis::vargha_delaney_a(samples("a", transform(a)),
                                             samples("b", transform(b)));
        CHECK(tr.a12 == doctest::Approx(ab.a12));
    }
}

TEST_CASE("bonferroni adjustment") {
    CHECK(analysis::bonferroni_alpha(0.05, 10) == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(analysis::bonferroni_alpha(0.05, 1) == doctest::Approx(0.05));
    CHECK(analysis::bonferroni_alpha(0.01, 4) == doctest::Approx(0.0025));
    CHECK_THROWS_AS(analysis::bonferroni_alpha(0.05, 0), ConfigError);
}
