#include <doctest.h>

#include <cmath>

#include "moco/metrics.hpp"
#include "oracles.hpp"

using namespace moco;
using namespace moco::metrics;

TEST_SUITE("metrics") {

TEST_CASE("exact hypervolume examples") {
    const double r2[] = {1, 1};
    const double r3[] = {1, 1, 1};
    std::vector<ObjectiveVector> a{{0, 0}};
    CHECK(hypervolume_exact(a, r2) == doctest::Approx(1.0));
    std::vector<ObjectiveVector> b{{0.2, 0.6}, {0.6, 0.2}};
    CHECK(hypervolume_exact(b, r2) == doctest::Approx(0.48).epsilon(1e-12));
    std::vector<ObjectiveVector> c{{0, 0, 0}};
    CHECK(hypervolume_exact(c, r3) == doctest::Approx(1.0));
    std::vector<ObjectiveVector> d{{0, 0, 0, 0}};
    const double r4[] = {1, 1, 1, 1};
    CHECK_THROWS_AS(hypervolume_exact(d, r4), std::invalid_argument);
    std::vector<ObjectiveVector> none;
    CHECK(hypervolume_exact(none, r2) == 0.0);
}

TEST_CASE("exact hypervolume matches inclusion-exclusion") {
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 2 + trial % 2;
        auto pts = oracle::random_points(rng, 1 + rng.below(5), m);
        ObjectiveVector r(m, 1.0);
        CHECK(hypervolume_exact(pts, r) == doctest::Approx(oracle::hv_inclusion_exclusion(pts, r)).epsilon(1e-9));
    }
}

TEST_CASE("monte carlo hypervolume examples") {
    const double r[] = {1, 1};
    std::vector<ObjectiveVector> a{{0, 0}};
    CHECK(std::abs(hypervolume_mc(a, r, 1000000, 1).value - 1.0) <= 0.002);
    std::vector<ObjectiveVector> b{{0.5, 0.5}};
    CHECK(std::abs(hypervolume_mc(b, r, 1000000, 1).value - 0.25) <= 0.002);
    std::vector<ObjectiveVector> c{{1, 0.5}};
    CHECK(hypervolume_mc(c, r, 1000, 1).value == 0.0);
    std::vector<ObjectiveVector> tri{{0.2, 0.3, 0.4}, {0.5, 0.1, 0.2}};
    const double r3[] = {1, 1, 1};
    auto est = hypervolume_mc(tri, r3, 200000, 3);
    CHECK(std::abs(est.value - hypervolume_exact(tri, r3)) <= 4 * est.std_error);
}

TEST_CASE("tabulated frames") {
    auto f = reference_frame(Problem::bi_tsp, 20);
    REQUIRE(f);
    CHECK(f->reference == ObjectiveVector{20, 20});
    CHECK(f->ideal == ObjectiveVector{0, 0});
    CHECK(reference_frame(Problem::tri_tsp, 100)->reference == ObjectiveVector{65, 65, 65});
    CHECK(reference_frame(Problem::bi_cvrp, 50)->reference == ObjectiveVector{45, 8});
    auto kp = reference_frame(Problem::bi_kp, 100);
    CHECK(kp->reference == ObjectiveVector{20, 20});
    CHECK(kp->ideal == ObjectiveVector{50, 50});
    CHECK(kp->orientation == Orientation::maximize);
    CHECK_FALSE(reference_frame(Problem::bi_tsp, 21));
}

TEST_CASE("normalized hypervolume") {
    std::vector<ObjectiveVector> origin{{0, 0}};
    CHECK(normalized_hv(origin, *reference_frame(Problem::bi_tsp, 20)) == doctest::Approx(1.0));
    std::vector<ObjectiveVector> best{{30, 30}};
    CHECK(normalized_hv(best, *reference_frame(Problem::bi_kp, 50)) == doctest::Approx(1.0));
    std::vector<ObjectiveVector> edge{{20, 5}};
    CHECK(normalized_hv(edge, *reference_frame(Problem::bi_tsp, 20)) == 0.0);
    ReferenceFrame bad{{1, 1}, {1, 0}, Orientation::minimize};
    CHECK_THROWS_AS(normalized_hv(origin, bad), std::invalid_argument);
}

TEST_CASE("front normalization") {
    std::vector<LabeledFront> fronts{{"a", {{0, 10}}}, {"b", {{10, 0}}}};
    auto n = normalize_fronts(fronts);
    CHECK(n.fronts[0].points[0] == ObjectiveVector{0, 1});
    CHECK(n.fronts[1].points[0] == ObjectiveVector{1, 0});
    std::vector<LabeledFront> flat{{"a", {{0, 1}}}, {"b", {{1, 1}}}};
    CHECK_THROWS_AS(normalize_fronts(flat), std::invalid_argument);
}

TEST_CASE("igd") {
    std::vector<ObjectiveVector> q{{0, 1}, {1, 0}};
    CHECK(igd(q, q) == 0.0);
    std::vector<ObjectiveVector> p{{0, 1}};
    CHECK(igd(p, q) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
    std::vector<ObjectiveVector> empty;
    CHECK(std::isinf(igd(empty, q)));
    CHECK_THROWS_AS(igd(p, empty), std::invalid_argument);
}

TEST_CASE("swdi") {
    std::vector<int> one{0, 0, 0};
    CHECK(swdi(one) == 0.0);
    std::vector<int> even{0, 0, 1, 1};
    CHECK(std::abs(swdi(even) - std::log(2.0)) <= 1e-12);
    std::vector<int> skew{0, 0, 0, 1};
    CHECK(std::abs(swdi(skew) - 0.56234) <= 1e-5);
}

TEST_CASE("cosine leader clustering") {
    std::vector<std::vector<double>> same{{1, 2}, {1, 2}};
    CHECK(cosine_leader_cluster(same) == std::vector<int>{0, 0});
    std::vector<std::vector<double>> ortho{{1, 0}, {0, 1}};
    CHECK(cosine_leader_cluster(ortho, 0.5) == std::vector<int>{0, 1});
    const double c = 0.95, s = std::sqrt(1 - c * c);
    std::vector<std::vector<double>> close{{1, 0}, {c, s}};
    CHECK(cosine_leader_cluster(close, 0.9) == std::vector<int>{0, 0});
    std::vector<std::vector<double>> zero{{0, 0}};
    CHECK_THROWS_AS(cosine_leader_cluster(zero), std::invalid_argument);
}

TEST_CASE("cdi") {
    std::vector<std::vector<double>> two{{0, 0}, {1, 1}};
    CHECK(cdi(two) == 0.0);
    std::vector<std::vector<double>> line{{0, 0}, {1, 0}, {2, 0}};
    CHECK(std::abs(cdi(line) - std::log(2.0)) <= 1e-12);
    std::vector<std::vector<double>> same{{1, 1}, {1, 1}, {1, 1}};
    CHECK(cdi(same) == 0.0);
    std::vector<std::vector<double>> one{{1, 1}};
    CHECK_THROWS_AS(cdi(one), std::invalid_argument);
}

TEST_CASE("knee score") {
    const double mid[] = {0.5, 0.5};
    const double corner[] = {0, 1};
    const double three[] = {0.25, 0.75, 0.5};
    const double out[] = {1.5, 0.5};
    CHECK(knee_score(mid) == 0.0);
    CHECK(knee_score(corner) == doctest::Approx(1.0));
    CHECK(knee_score(three) == doctest::Approx(0.5));
    CHECK_THROWS_AS(knee_score(out), std::invalid_argument);
}

TEST_CASE("source vectors") {
    auto a = source_vector("def f(x):\n    return x + 1\n");
    auto b = source_vector("def f(x):\n\n    return x+1");
    CHECK(a.size() == 256);
    CHECK(a == b);
    auto c = source_vector("while True: pass");
    CHECK(a != c);
}

}
