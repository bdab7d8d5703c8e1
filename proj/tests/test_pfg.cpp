#include <doctest.h>

#include <algorithm>
#include <set>

#include "moco/pfg.hpp"
#include "oracles.hpp"

using namespace moco;

namespace {

std::vector<GridMember> members(std::initializer_list<std::pair<double, double>> pts) {
    std::vector<GridMember> out;
    int i = 0;
    for (auto [a, b] : pts) out.push_back({"h" + std::to_string(i++), a, b});
    return out;
}

GridParams worked_params() {
    GridParams p;
    p.sigma = 0.5;
    return p;
}

}  // namespace

TEST_SUITE("pfg") {

TEST_CASE("worked example") {
    auto pop = members({{0, 10}, {10, 0}});
    auto g = ParetoFrontGrid::build(pop, worked_params());
    CHECK(g.delta()[0] == doctest::Approx(2.75));
    CHECK(g.delta()[1] == doctest::Approx(2.75));
    CHECK(g.cell_of("h0") == Cell{0, 3});
    CHECK(g.cell_of("h1") == Cell{3, 0});
    CHECK(g.neighbors({0, 3}).empty());
}

TEST_CASE("degenerate spread puts everyone in the middle cell") {
    auto pop = members({{1, 1}, {1, 1}, {1, 1}});
    GridParams p;
    auto g = ParetoFrontGrid::build(pop, p);
    CHECK(g.delta()[0] == doctest::Approx(2 * p.sigma / p.k1));
    CHECK(g.cells().size() == 1);
    CHECK(g.cells().begin()->first == Cell{2, 2});
    CHECK(g.elite().size() == 3);
}

TEST_CASE("intra-cell dominance keeps the dominating member") {
    auto pop = members({{1, 1}, {2, 2}, {0, 10}, {10, 0}});
    auto g = ParetoFrontGrid::build(pop, worked_params());
    CHECK(g.raw_cells().at({0, 0}).size() == 2);
    CHECK(g.cells().at({0, 0}) == std::vector<std::string>{"h0"});
}

TEST_CASE("neighborhoods") {
    std::vector<GridMember> pop;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) pop.push_back({std::to_string(i) + std::to_string(j), i * 10.0 / 3, j * 10.0 / 3});
    auto g = ParetoFrontGrid::build(pop, worked_params());
    CHECK(g.cells().size() == 16);
    auto n = g.neighbors({1, 1});
    CHECK(std::set<Cell>(n.begin(), n.end()) == std::set<Cell>{{0, 1}, {2, 1}, {1, 0}, {1, 2}});
    auto c = g.neighbors({0, 0});
    CHECK(std::set<Cell>(c.begin(), c.end()) == std::set<Cell>{{1, 0}, {0, 1}});
    CHECK_THROWS_AS(g.neighbors({4, 0}), std::invalid_argument);
    auto p = worked_params();
    p.moore = true;
    auto m = ParetoFrontGrid::build(pop, p);
    CHECK(m.neighbors({1, 1}).size() == 8);
}

TEST_CASE("mating pool branches") {
    auto pop = members({{0, 10}, {10, 0}, {5, 5}});
    auto g = ParetoFrontGrid::build(pop, worked_params());
    Rng rng(1);
    for (int k = 0; k < 100; ++k) {
        auto pool = select_mating_pool(g, 0.0, rng);
        CHECK_FALSE(pool.local);
        CHECK(pool.ids == g.elite());
    }
    auto single = ParetoFrontGrid::build(members({{1, 1}, {1, 1}}), GridParams{});
    auto pool = select_mating_pool(single, 1.0, rng);
    CHECK(pool.local);
    CHECK(pool.ids.size() == 2);

    int local = 0;
    const int draws = 100000;
    for (int k = 0; k < draws; ++k) local += select_mating_pool(g, 0.9, rng).local;
    CHECK(std::abs(local / double(draws) - 0.9) <= 0.01);
}

TEST_CASE("unevaluated heuristics are rejected") {
    std::vector<Heuristic> hs(2);
    CHECK_THROWS_AS(ParetoFrontGrid::build(std::span<const Heuristic>(hs), GridParams{}), StateError);
    std::vector<GridMember> none;
    CHECK_THROWS_AS(ParetoFrontGrid::build(none, GridParams{}), std::invalid_argument);
    GridParams bad;
    bad.k1 = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("grid invariants on random populations") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<GridMember> pop;
        const std::size_t n = 1 + rng.below(30);
        for (std::size_t i = 0; i < n; ++i)
            pop.push_back({"m" + std::to_string(i), -rng.uniform(), rng.uniform() * 10});
        GridParams p;
        p.k1 = 1 + static_cast<int>(rng.below(6));
        p.k2 = 1 + static_cast<int>(rng.below(6));
        auto g = ParetoFrontGrid::build(pop, p);
        std::set<std::string> elite(g.elite().begin(), g.elite().end());
        std::set<std::string> unions;
        for (const auto& [cell, ids] : g.cells()) {
            CHECK(cell.first >= 0);
            CHECK(cell.first < p.k1);
            CHECK(cell.second >= 0);
            CHECK(cell.second < p.k2);
            unions.insert(ids.begin(), ids.end());
        }
        CHECK(unions == elite);
        std::vector<ObjectiveVector> pts;
        for (const auto& m : pop) pts.push_back({m.e1, m.e2});
        for (std::size_t i = 0; i < n; ++i) {
            bool dominated = false;
            for (std::size_t j = 0; j < n; ++j) dominated = dominated || oracle::dominates(pts[j], pts[i]);
            if (!dominated) CHECK(elite.count(pop[i].id) == 1);
        }
    }
}

}
