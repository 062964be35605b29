#include <cmath>

#include "doctest.h"
#include "gfc/heuristics.hpp"

using namespace gfc;

TEST_SUITE("heuristics") {

TEST_CASE("k(n) formula values") {
    CHECK(heuristic_k(500) == 16);
    CHECK(heuristic_k(1) == 15);
    CHECK(heuristic_k(50000) == 115);
    CHECK_THROWS_AS(heuristic_k(0), std::invalid_argument);
}

TEST_CASE("softening formula values") {
    CHECK(heuristic_softening(0.01) == doctest::Approx(500.0 * std::exp(-0.05)).epsilon(1e-12));
    CHECK(heuristic_softening(0.01) == doctest::Approx(475.61).epsilon(1e-4));
    CHECK(heuristic_softening(0.2) == doctest::Approx(500.0 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(heuristic_softening(0.2) == doctest::Approx(183.94).epsilon(1e-4));
    CHECK(heuristic_softening(1000.0) == doctest::Approx(1e-6));
}

TEST_CASE("alpha formula values") {
    CHECK(heuristic_alpha(1.0) == doctest::Approx(12.0));
    CHECK(heuristic_alpha(0.01) == doctest::Approx(2.0 + 20.0 / 1.01));
    CHECK(heuristic_alpha(0.01) == doctest::Approx(21.80).epsilon(1e-3));
    CHECK(heuristic_alpha(1e12) == doctest::Approx(2.0));
}

TEST_CASE("bundle composes the formulas with the percentile radius") {
    std::vector<WeightedCentroid> sources(2);
    sources[0].position = {0.0, 0.0};
    sources[1].position = {4.0, 0.0};
    const auto hp = heuristic_all(500, 1.0, sources);
    CHECK(hp.local_k == 16);
    CHECK(hp.softening == doctest::Approx(500.0 * std::exp(-5.0)).epsilon(1e-12));
    CHECK(hp.softening == doctest::Approx(3.369).epsilon(1e-3));
    CHECK(hp.alpha == doctest::Approx(12.0));
    CHECK(hp.radius == doctest::Approx(4.0));
}

TEST_CASE("bundle: degenerate sources use the fallback radius") {
    std::vector<WeightedCentroid> sources(1);
    sources[0].position = {1.0, 1.0};
    const auto hp = heuristic_all(100, 0.5, sources);
    CHECK(hp.radius > 0.0);
}

TEST_CASE("monotonicity over grids") {
    // alpha and softening strictly decreasing in epsilon (until the floor)
    double prev_alpha = 1e18, prev_soft = 1e18;
    for (double eps : {0.01, 0.05, 0.1, 0.5, 1.0, 2.0, 3.0}) {
        const double a = heuristic_alpha(eps);
        const double s = heuristic_softening(eps);
        CHECK(a < prev_alpha);
        CHECK(s < prev_soft);
        prev_alpha = a;
        prev_soft = s;
    }
    CHECK(heuristic_alpha(0.01) > heuristic_alpha(0.1));
    CHECK(heuristic_alpha(0.1) > heuristic_alpha(1.0));

    // k non-decreasing in n
    int prev_k = 0;
    for (long long n : {1LL, 10LL, 500LL, 5000LL, 50000LL, 500000LL}) {
        const int k = heuristic_k(n);
        CHECK(k >= prev_k);
        prev_k = k;
    }
}

}  // TEST_SUITE
