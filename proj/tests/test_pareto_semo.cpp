#include <doctest.h>

#include <algorithm>

#include "moco/pareto.hpp"
#include "moco/semo.hpp"

using namespace moco;

namespace {

std::vector<ObjectiveVector> brute_filter(const std::vector<ObjectiveVector>& pts) {
    std::vector<ObjectiveVector> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dom = false;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (i == j) continue;
            bool le = true, lt = false;
            for (std::size_t k = 0; k < pts[i].size(); ++k) {
                le = le && pts[j][k] <= pts[i][k];
                lt = lt || pts[j][k] < pts[i][k];
            }
            dom = dom || (le && lt);
        }
        if (!dom) out.push_back(pts[i]);
    }
    return out;
}

}  // namespace

TEST_SUITE("pareto") {

TEST_CASE("dominance examples") {
    CHECK(dominates(std::vector<double>{1, 2}, std::vector<double>{2, 3}));
    CHECK_FALSE(dominates(std::vector<double>{1, 2}, std::vector<double>{1, 2}));
    CHECK_FALSE(dominates(std::vector<double>{1, 3}, std::vector<double>{2, 2}));
    CHECK_FALSE(dominates(std::vector<double>{2, 2}, std::vector<double>{1, 3}));
    CHECK_THROWS_AS(dominates(std::vector<double>{1}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("filter examples") {
    std::vector<ObjectiveVector> pts{{1, 2}, {2, 1}, {2, 2}};
    CHECK(nondominated_filter(pts) == std::vector<ObjectiveVector>{{1, 2}, {2, 1}});
    std::vector<ObjectiveVector> one{{4, 4}};
    CHECK(nondominated_filter(one) == one);
    std::vector<ObjectiveVector> eq{{1, 1}, {1, 1}, {1, 1}};
    CHECK(nondominated_filter(eq).size() == 3);
}

TEST_CASE("archive insert examples") {
    Archive a;
    CHECK(a.insert(Tour{}, {2, 2}));
    CHECK(a.insert(Tour{}, {1, 1}));
    CHECK(a.objectives() == std::vector<ObjectiveVector>{{1, 1}});
    CHECK_FALSE(a.insert(Tour{}, {3, 3}));
    CHECK(a.size() == 1);
    CHECK(a.insert(Tour{}, {0, 3}));
    CHECK(a.objectives() == std::vector<ObjectiveVector>{{1, 1}, {0, 3}});
    CHECK_FALSE(a.insert(Tour{}, {0, 3}));
    Archive dup(true);
    CHECK(dup.insert(Tour{}, {1, 1}));
    CHECK(dup.insert(Tour{}, {1, 1}));
    CHECK(dup.size() == 2);
}

TEST_CASE("archive replay matches the brute-force filter") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + rng.below(60);
        std::size_t m = 2 + rng.below(2);
        Archive a;
        std::vector<ObjectiveVector> accepted;
        for (std::size_t i = 0; i < n; ++i) {
            ObjectiveVector v(m);
            for (auto& x : v) x = static_cast<double>(rng.below(10));
            if (a.insert(Tour{}, v)) accepted.push_back(v);
        }
        auto expect = brute_filter(accepted);
        std::sort(expect.begin(), expect.end());
        expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
        auto got = a.objectives();
        std::sort(got.begin(), got.end());
        CHECK(got == expect);
    }
}

}

TEST_SUITE("semo") {

TEST_CASE("budget validation") {
    SemoBudget b;
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);
    b.time_limit_s = 0.0;
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);
    b.time_limit_s = 1.0;
    CHECK_NOTHROW(b.validate());
}

TEST_CASE("zero iterations keeps the initial solution") {
    ProblemContext ctx(generate_instance(Problem::bi_tsp, 20, 0));
    SemoBudget b;
    b.max_iterations = 0;
    auto r = run_semo(ctx, default_neighbor, b, 1);
    CHECK(r.archive.size() == 1);
    CHECK(r.iterations == 0);
}

TEST_CASE("default neighbor on a small tsp keeps a non-dominated archive") {
    TspInstance t = generate_motsp(20, 2, 4);
    t.n = 5;
    t.coords.resize(5 * 4);
    ProblemContext ctx(t);
    SemoBudget b;
    b.max_iterations = 500;
    auto r = run_semo(ctx, default_neighbor, b, 3);
    CHECK(r.iterations == 500);
    auto objs = r.archive.objectives();
    CHECK(brute_filter(objs).size() == objs.size());
    for (const auto& e : r.archive) CHECK_FALSE(ctx.validate(e.solution).has_value());
    CHECK(r.acceptance_trace.size() == 500);
}

TEST_CASE("default neighbor swaps exactly two positions") {
    TspInstance t = generate_motsp(20, 2, 4);
    t.n = 4;
    t.coords.resize(16);
    ProblemContext ctx(t);
    Archive a;
    a.insert(Tour{{0, 1, 2, 3}}, ctx.evaluate(Tour{{0, 1, 2, 3}}));
    Rng rng(8);
    for (int k = 0; k < 100; ++k) {
        auto s = std::get<Tour>(default_neighbor(a, ctx, rng));
        int diff = 0;
        for (int i = 0; i < 4; ++i) diff += s.order[i] != i;
        CHECK(diff == 2);
    }
}

TEST_CASE("default neighbor stays feasible on kp and cvrp") {
    Rng rng(2);
    for (auto p : {Problem::bi_kp, Problem::bi_cvrp}) {
        ProblemContext ctx(generate_instance(p, p == Problem::bi_kp ? 50 : 20, 6));
        Archive a;
        auto s = random_solution(ctx.instance(), rng);
        a.insert(s, ctx.evaluate(s));
        for (int k = 0; k < 2000; ++k) CHECK_FALSE(ctx.validate(default_neighbor(a, ctx, rng)).has_value());
    }
}

TEST_CASE("infeasible candidates are counted, faults abort") {
    ProblemContext ctx(generate_instance(Problem::bi_tsp, 20, 0));
    SemoBudget b;
    b.max_iterations = 50;
    auto bad = [](const Archive&, const ProblemContext&, Rng&) -> Solution { return Tour{{0, 0}}; };
    auto r = run_semo(ctx, bad, b, 1);
    CHECK(r.rejected_infeasible == 50);
    CHECK(r.archive.size() == 1);
    auto boom = [](const Archive&, const ProblemContext&, Rng&) -> Solution { throw std::runtime_error("boom"); };
    CHECK_THROWS_AS(run_semo(ctx, boom, b, 1), HeuristicFault);
}

TEST_CASE("virtual clock is deterministic and bounds time") {
    ProblemContext ctx(generate_instance(Problem::bi_tsp, 20, 0));
    SemoBudget b;
    b.max_iterations = 2000;
    b.time_limit_s = 60.0;
    b.virtual_clock = true;
    auto r1 = run_semo(ctx, default_neighbor, b, 9);
    auto r2 = run_semo(ctx, default_neighbor, b, 9);
    CHECK(r1.elapsed_s == r2.elapsed_s);
    CHECK(r1.archive.objectives() == r2.archive.objectives());
    SemoBudget tight;
    tight.time_limit_s = 1e-3;
    tight.virtual_clock = true;
    auto r3 = run_semo(ctx, default_neighbor, tight, 9);
    CHECK(r3.iterations < 1000);
    CHECK(r3.iterations > 0);
}

}
