#include "moco/semo.hpp"

#include <cassert>
#include <chrono>

namespace moco {

void SemoBudget::validate() const {
    if (!max_iterations && !time_limit_s) throw std::invalid_argument("SEMO budget needs an iteration or time bound");
    if (time_limit_s && !(*time_limit_s > 0.0)) throw std::invalid_argument("SEMO time limit must be positive");
    if (virtual_clock && !(seconds_per_op > 0.0)) throw std::invalid_argument("virtual clock cost must be positive");
}

SemoResult run_semo(const ProblemContext& context, const NeighborFn& neighbor, const SemoBudget& budget,
                    std::uint64_t seed) {
    budget.validate();
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    Rng rng(seed);

    SemoResult result;
    {
        Solution s = random_solution(context.instance(), rng);
        auto f = context.evaluate(s);
        result.archive.insert(std::move(s), std::move(f));
    }

    std::uint64_t ops = 0;
    auto elapsed = [&]() {
        if (budget.virtual_clock) return static_cast<double>(ops) * budget.seconds_per_op;
        return std::chrono::duration<double>(clock::now() - start).count();
    };

    while (true) {
        if (budget.max_iterations && result.iterations >= *budget.max_iterations) break;
        if (budget.time_limit_s && elapsed() >= *budget.time_limit_s) break;

        Solution candidate;
        try {
            candidate = neighbor(result.archive, context, rng);
        } catch (const std::exception& e) {
            throw HeuristicFault(e.what(), result.iterations);
        }
        ++result.iterations;
        ++ops;

        bool accepted = false;
        std::optional<ObjectiveVector> f;
        try {
            f = context.evaluate(candidate);
        } catch (const FeasibilityError&) {
        } catch (const std::invalid_argument&) {
            // wrong encoding for this problem family
        }
        if (f) {
            const auto before = result.archive.comparisons();
            accepted = result.archive.insert(std::move(candidate), std::move(*f));
            ops += result.archive.comparisons() - before;
        } else {
            ++result.rejected_infeasible;
        }
        if (accepted) ++result.accepted;
        result.acceptance_trace.push_back(accepted ? 1 : 0);

#ifndef NDEBUG
        if (result.iterations % 100 == 0) {
            auto objs = result.archive.objectives();
            assert(mutually_nondominated(objs));
        }
#endif
    }
    result.elapsed_s = elapsed();
    return result;
}

namespace {

Solution mutate_tour(Tour t, Rng& rng) {
    if (t.order.size() >= 2) {
        auto idx = rng.sample(t.order.size(), 2);
        std::swap(t.order[idx[0]], t.order[idx[1]]);
    }
    return t;
}

Solution mutate_selection(Selection s, const KpInstance& inst, Rng& rng) {
    if (s.bits.empty()) return s;
    std::size_t i = rng.below(s.bits.size());
    s.bits[i] ^= 1;
    double weight = 0.0;
    std::vector<std::size_t> selected;
    for (std::size_t k = 0; k < s.bits.size(); ++k)
        if (s.bits[k]) {
            weight += inst.weights[k];
            selected.push_back(k);
        }
    while (weight > inst.capacity && !selected.empty()) {
        std::size_t pick = rng.below(selected.size());
        std::size_t item = selected[pick];
        s.bits[item] = 0;
        weight -= inst.weights[item];
        selected.erase(selected.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return s;
}

Solution mutate_routes(const Routes& source, const CvrpInstance& inst, Rng& rng) {
    if (source.routes.size() < 2) return source;
    auto r = rng.sample(source.routes.size(), 2);
    Routes out = source;
    auto& a = out.routes[r[0]];
    auto& b = out.routes[r[1]];
    std::size_t ia = 1 + rng.below(a.size() - 2);
    std::size_t ib = 1 + rng.below(b.size() - 2);
    std::swap(a[ia], b[ib]);
    auto load = [&](const std::vector<int>& route) {
        int sum = 0;
        for (int c : route) sum += inst.raw_demand[c];
        return sum;
    };
    if (load(a) > inst.capacity || load(b) > inst.capacity) return source;
    return out;
}

}  // namespace

Solution default_neighbor(const Archive& archive, const ProblemContext& context, Rng& rng) {
    if (archive.empty()) throw StateError("default_neighbor: empty archive");
    const Solution& base = archive[rng.below(archive.size())].solution;
    switch (context.problem()) {
        case Problem::bi_tsp:
        case Problem::tri_tsp: return mutate_tour(std::get<Tour>(base), rng);
        case Problem::bi_kp: return mutate_selection(std::get<Selection>(base), context.kp(), rng);
        case Problem::bi_cvrp: return mutate_routes(std::get<Routes>(base), context.cvrp(), rng);
    }
    return base;
}

}  // namespace moco
