// Acceptance checks. Prints one PASS/FAIL line per criterion; exits 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "moco/baselines.hpp"
#include "moco/evolution.hpp"
#include "moco/metrics.hpp"
#include "moco/pareto.hpp"
#include "moco/pfg.hpp"
#include "oracles.hpp"

using namespace moco;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

using Check = std::function<void(Outcome&)>;

bool run_check(const std::string& name, double limit_s, const Check& check) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        check(out);
    } catch (const std::exception& e) {
        out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.require(secs < limit_s, "runtime over " + std::to_string(limit_s) + " s");
    std::printf("%s %s (%s%.1f s)\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.str().c_str(), secs);
    std::fflush(stdout);
    return out.pass;
}

std::vector<ObjectiveVector> random_front(Rng& rng, std::size_t n, std::size_t m) {
    return oracle::filter(oracle::random_points(rng, n, m));
}

void hv_oracle(Outcome& out) {
    Rng rng(20240501);
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t m = 2 + t % 2;
        auto front = random_front(rng, 1 + rng.below(5), m);
        ObjectiveVector r(m, 1.1);
        const double err = std::abs(metrics::hypervolume_exact(front, r) - oracle::hv_inclusion_exclusion(front, r));
        worst = std::max(worst, err);
    }
    out.require(worst <= 1e-9, "inclusion-exclusion mismatch");
    out.detail << "max |exact - IE| = " << worst << "; ";

    int within = 0;
    double worst_z = 0.0, sum_z = 0.0, sum_z2 = 0.0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t m = 2 + t % 2;
        auto front = random_front(rng, 1 + rng.below(50), m);
        ObjectiveVector r(m, 1.1);
        const double exact = metrics::hypervolume_exact(front, r);
        auto mc = metrics::hypervolume_mc(front, r, 1'000'000, 7000 + t);
        const double signed_z = mc.std_error > 0 ? (mc.value - exact) / mc.std_error : (mc.value == exact ? 0 : 1e9);
        const double z = std::abs(signed_z);
        sum_z += signed_z;
        sum_z2 += signed_z * signed_z;
        worst_z = std::max(worst_z, z);
        within += z <= 3.0;
    }
    out.require(within == 200, "monte carlo outside 3 SE");
    const double mean_z = sum_z / 200, sd_z = std::sqrt(sum_z2 / 200 - mean_z * mean_z);
    out.detail << "MC within 3 SE on " << within << "/200, max |z| = " << worst_z << ", z mean " << mean_z
               << " sd " << sd_z << "; ";
}

void dominance_oracle(Outcome& out) {
    Rng rng(31337);
    int mismatches = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 1 + rng.below(200);
        const std::size_t m = 2 + rng.below(2);
        std::vector<ObjectiveVector> seq(n, ObjectiveVector(m));
        const bool coarse = t % 2 == 0;
        for (auto& v : seq)
            for (auto& x : v) x = coarse ? static_cast<double>(rng.below(12)) : rng.uniform();

        auto filtered = nondominated_filter(seq);
        auto expect = oracle::filter(seq);
        if (filtered != expect) ++mismatches;

        Archive archive;
        for (const auto& v : seq) archive.insert(Tour{}, v);
        auto got = archive.objectives();
        std::sort(got.begin(), got.end());
        std::sort(expect.begin(), expect.end());
        expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
        if (got != expect) ++mismatches;
    }
    out.require(mismatches == 0, "filter or archive disagrees with brute force");
    out.detail << mismatches << " mismatches over 1000 sequences; ";
}

void pfg_invariants(Outcome& out) {
    Rng rng(4242);
    for (int t = 0; t < 500; ++t) {
        std::vector<GridMember> pop;
        const std::size_t n = 1 + rng.below(40);
        const bool ties = t % 3 == 0;
        for (std::size_t i = 0; i < n; ++i) {
            double a = -rng.uniform(), b = rng.uniform() * 50;
            if (ties) a = std::round(a * 4) / 4, b = std::round(b / 10) * 10;
            pop.push_back({"m" + std::to_string(i), a, b});
        }
        GridParams p;
        p.k1 = 1 + static_cast<int>(rng.below(8));
        p.k2 = 1 + static_cast<int>(rng.below(8));
        p.moore = rng.bernoulli(0.5);
        auto g = ParetoFrontGrid::build(pop, p);

        std::set<std::string> elite(g.elite().begin(), g.elite().end());
        std::set<std::string> unions;
        std::map<std::string, ObjectiveVector> pt;
        for (const auto& m : pop) pt[m.id] = {m.e1, m.e2};
        for (const auto& m : pop) {
            auto c = g.index_of(m.e1, m.e2);
            out.require(c.first >= 0 && c.first < p.k1 && c.second >= 0 && c.second < p.k2, "index out of range");
        }
        for (const auto& [cell, raw] : g.raw_cells()) {
            std::vector<ObjectiveVector> pts;
            for (const auto& id : raw) pts.push_back(pt[id]);
            auto nd = oracle::filter(pts);
            std::multiset<ObjectiveVector> want(nd.begin(), nd.end()), have;
            auto it = g.cells().find(cell);
            out.require(it != g.cells().end(), "occupied cell without elite members");
            if (it == g.cells().end()) continue;
            for (const auto& id : it->second) have.insert(pt[id]);
            out.require(have == want, "cell members are not the cell's non-dominated set");
            unions.insert(it->second.begin(), it->second.end());
        }
        out.require(unions == elite, "elite is not the union of cell sets");
        for (const auto& m : pop) {
            bool dominated = false;
            for (const auto& o : pop) dominated = dominated || oracle::dominates(pt[o.id], pt[m.id]);
            if (!dominated) out.require(elite.count(m.id) == 1, "global non-dominated member missing from elite");
        }
    }

    std::vector<GridMember> worked{{"a", 0, 10}, {"b", 10, 0}};
    GridParams wp;
    wp.sigma = 0.5;
    auto g = ParetoFrontGrid::build(worked, wp);
    out.require(g.cell_of("a") == Cell{0, 3} && g.cell_of("b") == Cell{3, 0}, "worked example cells");
    out.require(std::abs(g.delta()[0] - 2.75) < 1e-12 && std::abs(g.delta()[1] - 2.75) < 1e-12,
                "worked example cell width");
}

void metric_fixed_points(Outcome& out) {
    Rng rng(5);
    auto p = oracle::random_points(rng, 20, 2);
    out.require(metrics::igd(p, p) == 0.0, "IGD(P,P)");
    const int two_two[] = {0, 0, 1, 1};
    const int three_one[] = {0, 0, 0, 1};
    out.require(std::abs(metrics::swdi(two_two) - std::log(2.0)) <= 1e-12, "SWDI {2,2}");
    out.require(std::abs(metrics::swdi(three_one) - 0.56234) <= 1e-5, "SWDI {3,1}");
    std::vector<std::vector<double>> line{{0, 0}, {1, 1}, {2, 2}};
    out.require(std::abs(metrics::cdi(line) - std::log(2.0)) <= 1e-12, "CDI collinear");
    const double mid[] = {0.5, 0.5};
    const double corner[] = {0, 1};
    out.require(metrics::knee_score(mid) == 0.0, "knee (0.5, 0.5)");
    out.require(metrics::knee_score(corner) == 1.0, "knee (0, 1)");
}

void baseline_correctness(Outcome& out) {
    Rng rng(777);
    for (int t = 0; t < 500; ++t) {
        const std::size_t m = 2 + t % 2;
        auto pts = oracle::random_points(rng, 1 + rng.below(80), m);
        if (t % 4 == 0)
            for (auto& v : pts)
                for (auto& x : v) x = std::round(x * 6);
        auto rank = baselines::fast_nondominated_sort(pts);
        std::vector<ObjectiveVector> zero;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (rank[i] == 0) zero.push_back(pts[i]);
        out.require(zero == oracle::filter(pts), "rank 0 differs from dominance filter");
    }
    std::vector<ObjectiveVector> f{{1, 3}, {2, 2}, {3, 1}};
    out.require(std::abs(baselines::crowding_distance(f)[1] - 2.0) < 1e-12, "crowding example");

    for (int t = 0; t < 10000; ++t) {
        const std::size_t n = 2 + rng.below(60);
        std::vector<int> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = b[i] = static_cast<int>(i);
        rng.shuffle(a.begin(), a.end());
        rng.shuffle(b.begin(), b.end());
        auto child = baselines::pmx(a, b, rng);
        std::sort(child.begin(), child.end());
        bool valid = child.size() == n;
        for (std::size_t i = 0; valid && i < n; ++i) valid = child[i] == static_cast<int>(i);
        out.require(valid, "pmx produced an invalid permutation");
    }

    const double fv[] = {2, 4};
    const double half[] = {0.5, 0.5};
    const double axis[] = {1, 0};
    const double zero_pt[] = {0, 0};
    using baselines::Scalarization;
    out.require(std::abs(baselines::scalarize(Scalarization::weighted_sum, fv, half, zero_pt) - 3.0) <= 1e-9, "WS");
    out.require(std::abs(baselines::scalarize(Scalarization::tchebycheff, fv, half, zero_pt) - 2.0) <= 1e-9,
                "Tchebycheff");
    out.require(std::abs(baselines::scalarize(Scalarization::pbi, fv, axis, zero_pt, 5.0) - 22.0) <= 1e-9, "PBI");
}

void semo_improvement(Outcome& out) {
    const auto* info = find_builtin("bitsp_weighted_reverse");
    out.require(info != nullptr, "bitsp_weighted_reverse missing");
    if (!info) return;
    metrics::ReferenceFrame frame{{20, 20}, {0, 0}, metrics::Orientation::minimize};
    SemoBudget budget{2000, std::nullopt, false, 1e-6};
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ProblemContext ctx(generate_instance(Problem::bi_tsp, 20, seed));
        auto h = run_semo(ctx, info->neighbor, budget, seed);
        auto s = run_semo(ctx, default_neighbor, budget, seed);
        const double hv_h = metrics::normalized_hv(h.archive.objectives(), frame);
        const double hv_s = metrics::normalized_hv(s.archive.objectives(), frame);
        wins += hv_h > hv_s;
        out.detail << seed << ":" << std::round(hv_h * 1000) / 1000 << "/" << std::round(hv_s * 1000) / 1000 << " ";
    }
    out.require(wins >= 8, "builtin wins on fewer than 8 seeds");
    out.detail << "wins " << wins << "/10; ";
}

void end_to_end(Outcome& out) {
    EvolutionConfig c;
    c.population = 4;
    c.generations = 3;
    c.budget.virtual_clock = true;
    c.seed = 11;
    auto base = std::filesystem::temp_directory_path() / "moco_acceptance";
    std::filesystem::remove_all(base);

    llm::MockBackend mock(default_mock_table(c.problem));
    auto first = run_evolution(c, mock, base / "recorded");
    llm::ReplayBackend replay(llm::Transcript::load(base / "recorded" / "transcript.jsonl"));
    auto second = run_evolution(c, replay, base / "replayed");

    auto dump = [](const std::vector<Heuristic>& pop) {
        Json arr = Json::array();
        for (const auto& h : pop) arr.push_back(heuristic_to_json(h));
        return arr;
    };
    out.require(dump(first.population) == dump(second.population), "replayed population differs");
    std::vector<ObjectiveVector> pts;
    for (const auto& h : first.front) pts.push_back({h.fitness->e1, h.fitness->e2});
    out.require(!pts.empty() && oracle::mutually_nondominated(pts), "final front not mutually non-dominated");
    out.detail << "population " << first.population.size() << ", front " << pts.size() << "; ";

    Rng rng(90210);
    std::vector<GridMember> pop;
    for (int i = 0; i < 10; ++i) pop.push_back({"p" + std::to_string(i), -rng.uniform(), rng.uniform()});
    auto grid = ParetoFrontGrid::build(pop, GridParams{});
    int local = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) local += select_mating_pool(grid, 0.9, rng).local;
    const double freq = static_cast<double>(local) / draws;
    out.require(std::abs(freq - 0.9) <= 0.01, "epsilon branch frequency");
    out.detail << "local branch frequency " << freq << "; ";
}

}  // namespace

int main() {
    bool ok = true;
    ok &= run_check("hv-oracle", 120, hv_oracle);
    ok &= run_check("dominance-archive-oracle", 60, dominance_oracle);
    ok &= run_check("pfg-invariants", 30, pfg_invariants);
    ok &= run_check("metric-fixed-points", 5, metric_fixed_points);
    ok &= run_check("baseline-correctness", 60, baseline_correctness);
    ok &= run_check("semo-improvement", 300, semo_improvement);
    ok &= run_check("end-to-end-determinism", 120, end_to_end);
    return ok ? 0 : 1;
}
