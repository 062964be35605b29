#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "gfc/dataset.hpp"
#include "gfc/local.hpp"
#include "json.hpp"

using namespace gfc;

namespace {

PointSet from_rows(const std::vector<Vec>& rows) {
    PointSet ps(static_cast<int>(rows[0].size()));
    for (const auto& r : rows) ps.push_back(r);
    return ps;
}

}  // namespace

TEST_SUITE("local") {

TEST_CASE("kmeans: k=1 converges to the mean") {
    const auto pts = from_rows({{0, 0}, {2, 0}, {0, 2}, {2, 2}});
    const auto res = kmeans(pts, {1, 50, 1e-9, 0});
    CHECK(res.centroids[0][0] == doctest::Approx(1.0));
    CHECK(res.centroids[0][1] == doctest::Approx(1.0));
}

TEST_CASE("kmeans: k=n gives zero inertia") {
    const auto pts = from_rows({{0, 0}, {5, 0}, {0, 5}, {7, 7}});
    const auto res = kmeans(pts, {4, 50, 1e-9, 3});
    CHECK(res.inertia == doctest::Approx(0.0));
    std::vector<int> sorted = res.assignment;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("kmeans: recovers two separated blobs") {
    const Dataset d = generate_blobs(2, 200, 2, 0.5, 10.0, 21);
    const auto res = kmeans(d.points, {2, 100, 1e-8, 5});
    const PointSet centers = blob_centers(2, 2, 10.0);
    const double tol = 3.0 * 0.5 / std::sqrt(200.0);
    // match each centroid to its nearest generating mean
    for (int j = 0; j < 2; ++j) {
        double best = 1e18;
        for (int c = 0; c < 2; ++c)
            best = std::min(best, euclidean_distance(res.centroids[j], centers[c]));
        CHECK(best < tol);
    }
    CHECK(euclidean_distance(res.centroids[0], res.centroids[1]) > 5.0);
}

TEST_CASE("kmeans: k greater than n rejected") {
    const auto pts = from_rows({{0, 0}, {1, 1}});
    CHECK_THROWS_AS(kmeans(pts, {3, 10, 1e-6, 0}), std::invalid_argument);
}

TEST_CASE("kmeans: inertia non-increasing across iterations") {
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        PointSet pts(3);
        for (int i = 0; i < 120; ++i) {
            Vec p(3);
            for (double& x : p) x = rng.uniform(-5, 5);
            pts.push_back(p);
        }
        const auto res = kmeans(pts, {6, 40, 0.0, static_cast<std::uint64_t>(trial)});
        for (std::size_t i = 1; i < res.iteration_inertia.size(); ++i)
            CHECK(res.iteration_inertia[i] <= res.iteration_inertia[i - 1] + 1e-9);
    }
}

TEST_CASE("kmeans: every centroid keeps at least one member") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        PointSet pts(2);
        const int n = 10 + static_cast<int>(rng.uniform_index(40));
        for (int i = 0; i < n; ++i) {
            Vec p(2);
            for (double& x : p) x = rng.uniform(0, 1);
            pts.push_back(p);
        }
        const int k = 1 + static_cast<int>(rng.uniform_index(n));
        const auto res = kmeans(pts, {k, 30, 1e-7, static_cast<std::uint64_t>(trial) * 11});
        std::vector<int> counts(k, 0);
        for (int a : res.assignment) ++counts[a];
        for (int j = 0; j < k; ++j) CHECK(counts[j] > 0);
    }
}

TEST_CASE("kmeans: permutation invariance under fixed seed") {
    const Dataset d = generate_blobs(3, 30, 2, 1.0, 8.0, 13);
    const auto base = kmeans(d.points, {4, 50, 1e-8, 9});
    const std::size_t n = d.points.size();

    // reversal
    PointSet reversed(2);
    for (std::size_t i = 0; i < n; ++i) reversed.push_back(d.points[n - 1 - i]);
    const auto rev = kmeans(reversed, {4, 50, 1e-8, 9});
    CHECK(base.centroids.coords == rev.centroids.coords);
    for (std::size_t i = 0; i < n; ++i) CHECK(base.assignment[i] == rev.assignment[n - 1 - i]);

    // random shuffle
    Rng rng(99);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_index(i + 1)]);
    PointSet shuffled(2);
    for (std::size_t i : perm) shuffled.push_back(d.points[i]);
    const auto shuf = kmeans(shuffled, {4, 50, 1e-8, 9});
    CHECK(base.centroids.coords == shuf.centroids.coords);
    for (std::size_t k = 0; k < n; ++k) CHECK(shuf.assignment[k] == base.assignment[perm[k]]);
}

TEST_CASE("mass: all points at the centroid") {
    const auto pts = from_rows({{1, 1}, {1, 1}, {1, 1}});
    CHECK(cluster_mass(pts, Vec{1, 1}, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("mass: inertia equal to 2 sigma2 gives exp(-1)") {
    // single point at distance sqrt(2) from centroid, sigma2 = 1 -> I = 2
    const auto pts = from_rows({{1, 1}});
    CHECK(cluster_mass(pts, Vec{0, 0}, 1.0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("mass: hand-computed three point cluster") {
    // points {(0,0),(1,0),(0,1)}, centroid (1/3,1/3): I = 4/3, mass = e^{-2/3}
    const auto pts = from_rows({{0, 0}, {1, 0}, {0, 1}});
    const double m = cluster_mass(pts, Vec{1.0 / 3.0, 1.0 / 3.0}, 1.0);
    CHECK(m == doctest::Approx(std::exp(-2.0 / 3.0)).epsilon(1e-12));
    CHECK(m == doctest::Approx(0.5134).epsilon(1e-3));
}

TEST_CASE("mass: rejects non-positive sigma2 and empty cluster") {
    const auto pts = from_rows({{1, 0}});
    CHECK_THROWS_AS(cluster_mass(pts, Vec{0, 0}, 0.0), std::invalid_argument);
    PointSet empty(2);
    CHECK_THROWS_AS(cluster_mass(empty, Vec{0, 0}, 1.0), std::invalid_argument);
}

TEST_CASE("mass: strictly decreasing in inertia for fixed sigma2") {
    // nested point sets: each addition moves points farther out
    const auto tight = from_rows({{0.1, 0}, {-0.1, 0}});
    const auto mid = from_rows({{0.5, 0}, {-0.5, 0}});
    const auto wide = from_rows({{1.5, 0}, {-1.5, 0}});
    const Vec c{0, 0};
    const double m1 = cluster_mass(tight, c, 1.0);
    const double m2 = cluster_mass(mid, c, 1.0);
    const double m3 = cluster_mass(wide, c, 1.0);
    CHECK(m1 > m2);
    CHECK(m2 > m3);
    CHECK(m3 > 0.0);
    CHECK(m1 <= 1.0);
}

TEST_CASE("reciprocal mass variant") {
    const auto pts = from_rows({{1, 0}});  // I = 1 from origin
    CHECK(cluster_mass_reciprocal(pts, Vec{0, 0}, 0.5) == doctest::Approx(1.0 / 1.5));
}

TEST_CASE("sigma2: hand-computed 1D example") {
    // points {0, 1, 3}: squared distances {1, 9, 4}, population variance 98/9
    const auto pts = from_rows({{0.0}, {1.0}, {3.0}});
    CHECK(client_sigma2(pts) == doctest::Approx(98.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("sigma2: degenerate inputs hit the floor") {
    const auto same = from_rows({{2, 2}, {2, 2}, {2, 2}});
    CHECK(client_sigma2(same) == doctest::Approx(0.0));  // zero-diagonal box floor

    const auto pair = from_rows({{0, 0}, {1, 0}});  // single pair, variance 0
    const double s2 = client_sigma2(pair);
    CHECK(s2 == doctest::Approx(1e-9).epsilon(1e-6));  // floor = 1e-9 * diag^2, diag = 1
}

TEST_CASE("sigma2: subsampling engages on large shards") {
    Rng rng(3);
    PointSet pts(2);
    for (int i = 0; i < 600; ++i) {  // C(600,2) = 179700 > 1e5
        Vec p(2);
        for (double& x : p) x = rng.uniform(0, 1);
        pts.push_back(p);
    }
    bool subsampled = false;
    const double est = client_sigma2(pts, Rng(1), &subsampled);
    CHECK(subsampled);
    // estimator should be close to the exhaustive value on iid uniform data
    PointSet small(2);
    for (std::size_t i = 0; i < 400; ++i) small.push_back(pts[i]);
    bool sub2 = false;
    const double exact_small = client_sigma2(small, Rng(1), &sub2);
    CHECK_FALSE(sub2);
    CHECK(std::fabs(est - exact_small) / exact_small < 0.25);
}

TEST_CASE("client_phase: degenerate shard gives mass 1 at the location") {
    ClientShard sh;
    sh.client_id = 4;
    sh.points = from_rows({{3, 3}, {3, 3}, {3, 3}});
    // epsilon large enough that the squared noise underflows to exactly zero
    const auto out = client_phase(sh, {1e308, 10.0}, {1, 20, 1e-8, 0}, Rng(1));
    REQUIRE(out.size() == 1);
    CHECK(out[0].position[0] == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(out[0].mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(out[0].member_count == 3);
    CHECK(out[0].source_client == 4);
}

TEST_CASE("client_phase: masses within (0,1] on a two-blob shard") {
    const Dataset d = generate_blobs(2, 40, 2, 0.5, 10.0, 6);
    ClientShard sh;
    sh.client_id = 0;
    sh.points = d.points;
    const auto out = client_phase(sh, {1000.0, 25.0}, {2, 50, 1e-8, 2}, Rng(5));
    REQUIRE(out.size() == 2);
    for (const auto& wc : out) {
        CHECK(wc.mass > 0.0);
        CHECK(wc.mass <= 1.0);
        CHECK(wc.member_count > 0);
    }
}

TEST_CASE("client_phase: k above the shard size rejected") {
    ClientShard sh;
    sh.points = from_rows({{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    CHECK_THROWS_AS(client_phase(sh, {1.0, 1.0}, {5, 10, 1e-6, 0}, Rng(0)),
                    std::invalid_argument);
}

TEST_CASE("client_phase: sigma override is honored") {
    const Dataset d = generate_blobs(1, 30, 2, 0.5, 5.0, 8);
    ClientShard sh;
    sh.client_id = 0;
    sh.points = d.points;
    const auto a = client_phase(sh, {1e9, 30.0}, {1, 50, 1e-8, 1}, Rng(2), 1e12);
    // enormous sigma2 pushes the mass toward exp(0) = 1
    CHECK(a[0].mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("wire format: JSON round trip") {
    std::vector<WeightedCentroid> cs(2);
    cs[0] = {{1.5, -2.0}, 0.75, 3, 17};
    cs[1] = {{0.0, 4.25}, 0.5, 3, 5};
    const std::string wire = centroids_to_json(3, cs);
    const auto parsed = nlohmann::json::parse(wire);
    CHECK(parsed["client_id"] == 3);
    CHECK(parsed["centroids"].size() == 2);

    const auto back = centroids_from_json(wire);
    REQUIRE(back.size() == 2);
    CHECK(back[0].position == cs[0].position);
    CHECK(back[0].mass == cs[0].mass);
    CHECK(back[1].member_count == 5);
    CHECK(back[1].source_client == 3);
}

}  // TEST_SUITE
