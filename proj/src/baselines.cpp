#include "moco/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace moco::baselines {

std::vector<int> fast_nondominated_sort(std::span<const ObjectiveVector> points) {
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<int> count(n, 0);
    std::vector<int> rank(n, -1);
    std::vector<std::size_t> front;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(points[p], points[q]))
                dominated_by[p].push_back(q);
            else if (dominates(points[q], points[p]))
                ++count[p];
        }
        if (count[p] == 0) {
            rank[p] = 0;
            front.push_back(p);
        }
    }
    int r = 0;
    while (!front.empty()) {
        std::vector<std::size_t> next;
        for (auto p : front)
            for (auto q : dominated_by[p])
                if (--count[q] == 0) {
                    rank[q] = r + 1;
                    next.push_back(q);
                }
        ++r;
        front = std::move(next);
    }
    return rank;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
    const std::size_t n = front.size();
    std::vector<double> d(n, 0.0);
    if (n == 0) return d;
    const double inf = std::numeric_limits<double>::infinity();
    if (n <= 2) return std::vector<double>(n, inf);
    std::vector<std::size_t> order(n);
    for (std::size_t m = 0; m < front[0].size(); ++m) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return front[a][m] < front[b][m]; });
        const double lo = front[order.front()][m];
        const double hi = front[order.back()][m];
        d[order.front()] = inf;
        d[order.back()] = inf;
        if (!(hi > lo)) continue;
        for (std::size_t i = 1; i + 1 < n; ++i) d[order[i]] += (front[order[i + 1]][m] - front[order[i - 1]][m]) / (hi - lo);
    }
    return d;
}

bool tournament_less(const RankKey& a, const RankKey& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    if (a.crowding != b.crowding) return a.crowding > b.crowding;
    return a.id < b.id;
}

std::vector<int> pmx(const std::vector<int>& p1, const std::vector<int>& p2, std::size_t cut1, std::size_t cut2) {
    const std::size_t n = p1.size();
    if (p2.size() != n) throw std::invalid_argument("pmx: parents differ in length");
    if (cut1 > cut2 || cut2 >= n) throw std::invalid_argument("pmx: bad cut points");
    std::unordered_map<int, std::size_t> pos1;
    for (std::size_t i = 0; i < n; ++i) pos1[p1[i]] = i;
    std::vector<int> child(n);
    auto in_segment = [&](int v) {
        auto it = pos1.find(v);
        return it != pos1.end() && it->second >= cut1 && it->second <= cut2;
    };
    for (std::size_t i = cut1; i <= cut2; ++i) child[i] = p1[i];
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= cut1 && i <= cut2) continue;
        int v = p2[i];
        while (in_segment(v)) v = p2[pos1.at(v)];
        child[i] = v;
    }
    return child;
}

std::vector<int> pmx(const std::vector<int>& p1, const std::vector<int>& p2, Rng& rng) {
    if (p1.size() < 2) return p1;
    auto cuts = rng.sample(p1.size(), 2);
    auto [a, b] = std::minmax(cuts[0], cuts[1]);
    return pmx(p1, p2, a, b);
}

void swap_mutation(std::vector<int>& perm, Rng& rng) {
    if (perm.size() < 2) return;
    auto idx = rng.sample(perm.size(), 2);
    std::swap(perm[idx[0]], perm[idx[1]]);
}

std::vector<std::uint8_t> uniform_crossover(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b,
                                            Rng& rng) {
    if (a.size() != b.size()) throw std::invalid_argument("uniform crossover: parents differ in length");
    std::vector<std::uint8_t> child(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) child[i] = rng.bernoulli(0.5) ? a[i] : b[i];
    return child;
}

void bit_flip_repair(std::vector<std::uint8_t>& bits, double rate, const KpInstance& instance, Rng& rng) {
    for (auto& b : bits)
        if (rng.bernoulli(rate)) b ^= 1;
    auto weight = [&] {
        double w = 0.0;
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) w += instance.weights[i];
        return w;
    };
    while (weight() > instance.capacity) {
        std::vector<std::size_t> on;
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) on.push_back(i);
        bits[on[rng.below(on.size())]] = 0;
    }
}

Routes split_giant_tour(const std::vector<int>& customers, const CvrpInstance& instance) {
    Routes out;
    std::vector<int> route{0};
    int load = 0;
    for (int c : customers) {
        const int d = instance.raw_demand.at(static_cast<std::size_t>(c));
        if (route.size() > 1 && load + d > instance.capacity) {
            route.push_back(0);
            out.routes.push_back(std::move(route));
            route = {0};
            load = 0;
        }
        route.push_back(c);
        load += d;
    }
    if (route.size() > 1) {
        route.push_back(0);
        out.routes.push_back(std::move(route));
    }
    return out;
}

Solution decode(const Genome& genome, const ProblemContext& context) {
    switch (context.problem()) {
        case Problem::bi_tsp:
        case Problem::tri_tsp: return Tour{genome.perm};
        case Problem::bi_cvrp: return split_giant_tour(genome.perm, context.cvrp());
        case Problem::bi_kp: return Selection{genome.bits};
    }
    return Tour{genome.perm};
}

Genome random_genome(const ProblemContext& context, Rng& rng) {
    Genome g;
    switch (context.problem()) {
        case Problem::bi_tsp:
        case Problem::tri_tsp:
            g.perm.resize(context.size());
            std::iota(g.perm.begin(), g.perm.end(), 0);
            rng.shuffle(g.perm.begin(), g.perm.end());
            break;
        case Problem::bi_cvrp:
            g.perm.resize(context.size());
            std::iota(g.perm.begin(), g.perm.end(), 1);
            rng.shuffle(g.perm.begin(), g.perm.end());
            break;
        case Problem::bi_kp: g.bits = std::get<Selection>(random_solution(context.instance(), rng)).bits; break;
    }
    return g;
}

namespace {

Genome make_child(const Genome& a, const Genome& b, const ProblemContext& ctx, const VariationParams& v, Rng& rng) {
    Genome child;
    if (ctx.problem() == Problem::bi_kp) {
        child.bits = rng.bernoulli(v.crossover_rate) ? uniform_crossover(a.bits, b.bits, rng) : a.bits;
        const double rate = v.bit_rate > 0.0 ? v.bit_rate : 1.0 / static_cast<double>(child.bits.size());
        bit_flip_repair(child.bits, rate, ctx.kp(), rng);
    } else {
        child.perm = rng.bernoulli(v.crossover_rate) ? pmx(a.perm, b.perm, rng) : a.perm;
        if (rng.bernoulli(v.swap_rate)) swap_mutation(child.perm, rng);
    }
    return child;
}

ObjectiveVector evaluate_or_parent(Genome& child, const Genome& parent, const ProblemContext& ctx) {
    try {
        return ctx.evaluate(decode(child, ctx));
    } catch (const FeasibilityError&) {
        child = parent;
        return ctx.evaluate(decode(child, ctx));
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Json variation_json(const VariationParams& v) {
    return {{"crossover_rate", v.crossover_rate}, {"swap_rate", v.swap_rate}, {"bit_rate", v.bit_rate}};
}

}  // namespace

Json baseline_result_to_json(const BaselineResult& result) {
    return {{"algorithm", result.algorithm},
            {"evaluations", result.evaluations},
            {"elapsed_s", result.elapsed_s},
            {"params", result.params},
            {"archive", archive_to_json(result.front)}};
}

BaselineResult nsga2_run(const ProblemContext& context, const Nsga2Params& params, std::uint64_t seed) {
    if (params.pop_size < 2) throw std::invalid_argument("NSGA-II needs a population of at least 2");
    const auto start = std::chrono::steady_clock::now();
    Rng rng(seed);
    BaselineResult result;
    result.algorithm = "nsga2";
    result.params = {{"pop_size", params.pop_size},
                     {"generations", params.generations},
                     {"variation", variation_json(params.variation)}};

    const std::size_t n = params.pop_size;
    std::vector<Genome> pop;
    std::vector<ObjectiveVector> objs;
    for (std::size_t i = 0; i < n; ++i) {
        pop.push_back(random_genome(context, rng));
        objs.push_back(context.evaluate(decode(pop.back(), context)));
        ++result.evaluations;
    }

    // rank and crowding for every member of `points`
    auto rank_all = [](const std::vector<ObjectiveVector>& points) {
        auto ranks = fast_nondominated_sort(points);
        std::vector<RankKey> keys(points.size());
        int max_rank = ranks.empty() ? -1 : *std::max_element(ranks.begin(), ranks.end());
        for (int r = 0; r <= max_rank; ++r) {
            std::vector<std::size_t> members;
            std::vector<ObjectiveVector> front;
            for (std::size_t i = 0; i < points.size(); ++i)
                if (ranks[i] == r) {
                    members.push_back(i);
                    front.push_back(points[i]);
                }
            auto d = crowding_distance(front);
            for (std::size_t k = 0; k < members.size(); ++k) keys[members[k]] = {r, d[k], members[k]};
        }
        return keys;
    };

    for (std::size_t gen = 0; gen < params.generations; ++gen) {
        auto keys = rank_all(objs);
        auto tournament = [&]() -> std::size_t {
            auto a = rng.below(n);
            auto b = rng.below(n);
            return tournament_less(keys[a], keys[b]) ? a : b;
        };
        std::vector<Genome> merged = pop;
        std::vector<ObjectiveVector> merged_objs = objs;
        for (std::size_t i = 0; i < n; ++i) {
            const Genome& a = pop[tournament()];
            const Genome& b = pop[tournament()];
            Genome child = make_child(a, b, context, params.variation, rng);
            merged_objs.push_back(evaluate_or_parent(child, a, context));
            merged.push_back(std::move(child));
            ++result.evaluations;
        }
        auto merged_keys = rank_all(merged_objs);
        std::vector<std::size_t> order(merged.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](auto x, auto y) { return tournament_less(merged_keys[x], merged_keys[y]); });
        pop.clear();
        objs.clear();
        for (std::size_t k = 0; k < n; ++k) {
            pop.push_back(std::move(merged[order[k]]));
            objs.push_back(std::move(merged_objs[order[k]]));
        }
    }

    auto ranks = fast_nondominated_sort(objs);
    for (std::size_t i = 0; i < n; ++i)
        if (ranks[i] == 0) result.front.insert(decode(pop[i], context), objs[i]);
    result.elapsed_s = seconds_since(start);
    return result;
}

namespace {

void lattice(std::size_t m, std::size_t h, std::size_t left, ObjectiveVector& cur, std::vector<ObjectiveVector>& out) {
    if (cur.size() + 1 == m) {
        cur.push_back(static_cast<double>(left) / static_cast<double>(h));
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (std::size_t i = 0; i <= left; ++i) {
        cur.push_back(static_cast<double>(i) / static_cast<double>(h));
        lattice(m, h, left - i, cur, out);
        cur.pop_back();
    }
}

}  // namespace

WeightVectorSet make_weight_vectors(std::size_t k, std::size_t m, std::size_t t) {
    if (m != 2 && m != 3) throw std::invalid_argument("weight vectors: M must be 2 or 3");
    if (k < m) throw std::invalid_argument("weight vectors: K must be at least M");
    WeightVectorSet set;
    std::size_t h = k - 1;
    if (m == 3) {
        h = 1;
        while ((h + 2) * (h + 3) / 2 <= k) ++h;
    }
    ObjectiveVector cur;
    lattice(m, h, h, cur, set.weights);

    const std::size_t count = set.weights.size();
    const std::size_t tt = std::min(std::max<std::size_t>(t, 1), count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<std::pair<double, std::size_t>> dist;
        for (std::size_t j = 0; j < count; ++j) {
            double d2 = 0.0;
            for (std::size_t c = 0; c < m; ++c) d2 += std::pow(set.weights[i][c] - set.weights[j][c], 2);
            dist.emplace_back(d2, j);
        }
        std::sort(dist.begin(), dist.end());
        std::vector<std::size_t> nb;
        for (std::size_t j = 0; j < tt; ++j) nb.push_back(dist[j].second);
        set.neighborhoods.push_back(std::move(nb));
    }
    return set;
}

double scalarize(Scalarization kind, std::span<const double> f, std::span<const double> lambda,
                 std::span<const double> ideal, double theta) {
    if (f.size() != lambda.size() || f.size() != ideal.size())
        throw std::invalid_argument("scalarize: dimension mismatch");
    switch (kind) {
        case Scalarization::weighted_sum: {
            double s = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i) s += lambda[i] * f[i];
            return s;
        }
        case Scalarization::tchebycheff: {
            double s = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < f.size(); ++i) s = std::max(s, lambda[i] * std::abs(f[i] - ideal[i]));
            return s;
        }
        case Scalarization::pbi: {
            double norm = 0.0;
            for (double l : lambda) norm += l * l;
            norm = std::sqrt(norm);
            if (!(norm > 0.0)) throw std::invalid_argument("PBI needs a non-zero weight vector");
            double d1 = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i) d1 += (f[i] - ideal[i]) * lambda[i] / norm;
            double d2 = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i) {
                double r = f[i] - (ideal[i] + d1 * lambda[i] / norm);
                d2 += r * r;
            }
            return d1 + theta * std::sqrt(d2);
        }
    }
    return 0.0;
}

std::vector<std::size_t> moead_update(const ObjectiveVector& child, std::span<const std::size_t> neighborhood,
                                      const WeightVectorSet& weights, std::vector<ObjectiveVector>& incumbents,
                                      std::span<const double> ideal, Scalarization kind, double theta) {
    std::vector<std::size_t> replaced;
    for (auto j : neighborhood) {
        const auto& lambda = weights.weights[j];
        if (scalarize(kind, child, lambda, ideal, theta) < scalarize(kind, incumbents[j], lambda, ideal, theta)) {
            incumbents[j] = child;
            replaced.push_back(j);
        }
    }
    return replaced;
}

BaselineResult moead_run(const ProblemContext& context, const MoeadParams& params, std::uint64_t seed,
                         MoeadTrace* trace) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(seed);
    const std::size_t m = context.objectives();
    auto weights = make_weight_vectors(params.subproblems, m, params.neighborhood);
    const std::size_t k = weights.weights.size();

    BaselineResult result;
    result.algorithm = "moead";
    result.params = {{"subproblems", k},
                     {"neighborhood", params.neighborhood},
                     {"generations", params.generations},
                     {"scalarization", params.kind == Scalarization::tchebycheff ? "tchebycheff"
                                       : params.kind == Scalarization::pbi        ? "pbi"
                                                                                  : "weighted_sum"},
                     {"theta", params.theta},
                     {"variation", variation_json(params.variation)}};

    std::vector<Genome> pop;
    std::vector<ObjectiveVector> objs;
    ObjectiveVector ideal(m, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < k; ++i) {
        pop.push_back(random_genome(context, rng));
        objs.push_back(context.evaluate(decode(pop.back(), context)));
        ++result.evaluations;
        for (std::size_t c = 0; c < m; ++c) ideal[c] = std::min(ideal[c], objs.back()[c]);
        result.front.insert(decode(pop.back(), context), objs.back());
    }

    for (std::size_t gen = 0; gen < params.generations; ++gen) {
        for (std::size_t i = 0; i < k; ++i) {
            const auto& nb = weights.neighborhoods[i];
            std::size_t a = nb[rng.below(nb.size())];
            std::size_t b = a;
            if (nb.size() > 1) {
                auto two = rng.sample(nb.size(), 2);
                a = nb[two[0]];
                b = nb[two[1]];
            }
            Genome child = make_child(pop[a], pop[b], context, params.variation, rng);
            ObjectiveVector f = evaluate_or_parent(child, pop[a], context);
            ++result.evaluations;
            for (std::size_t c = 0; c < m; ++c) ideal[c] = std::min(ideal[c], f[c]);
            for (auto j : moead_update(f, nb, weights, objs, ideal, params.kind, params.theta)) pop[j] = child;
            result.front.insert(decode(child, context), f);
        }
        if (trace) trace->ideal_history.push_back(ideal);
    }
    result.elapsed_s = seconds_since(start);
    return result;
}

std::uint64_t semo_baseline_iterations(Problem problem) {
    return problem == Problem::bi_tsp || problem == Problem::tri_tsp ? 20000 : 10000;
}

BaselineResult semo_baseline(const ProblemContext& context, std::uint64_t seed) {
    SemoBudget budget;
    budget.max_iterations = semo_baseline_iterations(context.problem());
    auto r = run_semo(context, default_neighbor, budget, seed);
    BaselineResult result;
    result.algorithm = "semo";
    result.front = std::move(r.archive);
    result.evaluations = r.iterations + 1;
    result.elapsed_s = r.elapsed_s;
    result.params = {{"iterations", *budget.max_iterations}};
    return result;
}

}  // namespace moco::baselines
