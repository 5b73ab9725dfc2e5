#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "elite_surge/rng.hpp"
#include "elite_surge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace elite_surge;

namespace {

// independent U oracle: pair counting with half credit for ties
double brute_force_u(const std::vector<double>& a, const std::vector<double>& b) {
    double u = 0.0;
    for (const double x : a)
        for (const double y : b) {
            if (x > y)
                u += 1.0;
            else if (x == y)
                u += 0.5;
        }
    return u;
}

std::vector<double> random_sample(Rng& rng, int n, int lo, int hi) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& v : out)
        v = static_cast<double>(lo + rng.below(hi - lo));
    return out;
}

}  // namespace

TEST_CASE("separated samples: exact enumeration example") {
    const std::vector<double> a{1, 2, 3};
    const std::vector<double> b{4, 5, 6};
    const auto exact = mann_whitney_u_exact(a, b);
    CHECK(exact.u_statistic == 0.0);
    CHECK(exact.p_two_sided == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("all-tied samples give p = 1 and central U") {
    const std::vector<double> a{2.5, 2.5, 2.5};
    const std::vector<double> b{2.5, 2.5};
    const auto result = mann_whitney_u(a, b);
    CHECK(result.p_two_sided == 1.0);
    CHECK(result.u_statistic == doctest::Approx(3.0));  // |a||b|/2
}

TEST_CASE("identical samples classify as equivalent") {
    const std::vector<double> x{1.0, 5.0, 2.0, 8.0, 4.0};
    const auto verdict = classify(x, x);
    CHECK(verdict.symbol == Significance::Equivalent);
    CHECK(verdict.direction == Direction::None);
    CHECK(verdict.p_two_sided == doctest::Approx(1.0));
}

TEST_CASE("U statistic matches the pair-counting oracle") {
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(12));
        const int m = 2 + static_cast<int>(rng.below(12));
        const auto a = random_sample(rng, n, 0, 10);
        const auto b = random_sample(rng, m, 0, 10);
        const auto result = mann_whitney_u(a, b);
        CHECK(result.u_statistic == doctest::Approx(brute_force_u(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("U symmetry identity holds exactly") {
    Rng rng(12);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(20));
        const int m = 2 + static_cast<int>(rng.below(20));
        const auto a = random_sample(rng, n, 0, 6);
        const auto b = random_sample(rng, m, 0, 6);
        const double u_ab = mann_whitney_u(a, b).u_statistic;
        const double u_ba = mann_whitney_u(b, a).u_statistic;
        CHECK(u_ab + u_ba == static_cast<double>(n) * static_cast<double>(m));
    }
}

TEST_CASE("p is invariant under joint monotone transforms") {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(15));
        const int m = 3 + static_cast<int>(rng.below(15));
        std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(m));
        for (auto& v : a)
            v = rng.normal();
        for (auto& v : b)
            v = rng.normal() + 0.4;
        const auto base = mann_whitney_u(a, b);

        auto ea = a, eb = b;
        for (auto& v : ea)
            v = std::exp(v);
        for (auto& v : eb)
            v = std::exp(v);
        const auto exp_result = mann_whitney_u(ea, eb);
        CHECK(exp_result.p_two_sided == base.p_two_sided);
        CHECK(exp_result.u_statistic == base.u_statistic);

        auto fa = a, fb = b;
        for (auto& v : fa)
            v = 3.0 * v + 11.0;
        for (auto& v : fb)
            v = 3.0 * v + 11.0;
        const auto affine = mann_whitney_u(fa, fb);
        CHECK(affine.p_two_sided == base.p_two_sided);
        CHECK(affine.u_statistic == base.u_statistic);
    }
}

TEST_CASE("normal approximation tracks exact enumeration in the decision region") {
    // wide value range: ties are incidental here; heavy-tie behavior is
    // covered by the dedicated tie tests above
    Rng rng(14);
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(13));
        const int m = 2 + static_cast<int>(rng.below(13));
        if (n + m > 16)
            continue;
        const auto a = random_sample(rng, n, 0, 5000);
        const auto b = random_sample(rng, m, 2000, 7000);
        const auto approx = mann_whitney_u(a, b);
        const auto exact = mann_whitney_u_exact(a, b);
        if (std::min(approx.p_two_sided, exact.p_two_sided) <= 0.05) {
            CHECK(std::fabs(approx.p_two_sided - exact.p_two_sided) <= 0.02);
            ++checked;
        }
    }
    CHECK(checked > 30);
}

TEST_CASE("classification thresholds") {
    // fully separated n=30 samples: p far below 0.01
    std::vector<double> hybrid(30, 0.1), baseline(30, 9.9);
    for (int i = 0; i < 30; ++i) {
        hybrid[static_cast<std::size_t>(i)] += 0.001 * i;
        baseline[static_cast<std::size_t>(i)] += 0.001 * i;
    }
    auto verdict = classify(hybrid, baseline);
    CHECK(verdict.symbol == Significance::MuchBetter);
    CHECK(verdict.direction == Direction::HybridBetter);
    CHECK(verdict.p_two_sided < 0.01);

    // baseline-superior collapses to equivalent but keeps the raw direction
    verdict = classify(baseline, hybrid);
    CHECK(verdict.symbol == Significance::Equivalent);
    CHECK(verdict.direction == Direction::BaselineBetter);
    CHECK(verdict.p_two_sided < 0.01);
}

TEST_CASE("better-but-not-much-better lands on >") {
    // overlapping samples with a moderate shift: tune so 0.01 <= p < 0.05
    Rng rng(15);
    std::vector<double> hybrid, baseline;
    for (int i = 0; i < 30; ++i) {
        hybrid.push_back(rng.normal());
        baseline.push_back(rng.normal() + 0.62);
    }
    const auto verdict = classify(hybrid, baseline);
    REQUIRE(verdict.p_two_sided >= 0.01);
    REQUIRE(verdict.p_two_sided < 0.05);
    CHECK(verdict.symbol == Significance::Better);
}

TEST_CASE("exact path rejects oversized inputs") {
    const std::vector<double> big(11, 1.0);
    CHECK_THROWS_AS(mann_whitney_u_exact(big, big), std::invalid_argument);
}

TEST_CASE("symbol and name tables") {
    CHECK(std::string(significance_symbol(Significance::MuchBetter)) == ">>");
    CHECK(std::string(significance_symbol(Significance::Better)) == ">");
    CHECK(std::string(significance_symbol(Significance::Equivalent)) == "~");
    CHECK(std::string(significance_name(Significance::MuchBetter)) == "MUCH_BETTER");
    CHECK(std::string(direction_name(Direction::HybridBetter)) == "hybrid_better");
}
