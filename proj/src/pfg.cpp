#include "moco/pfg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "moco/pareto.hpp"

namespace moco {

void GridParams::validate() const {
    if (k1 < 1 || k2 < 1) throw std::invalid_argument("grid needs at least one segment per axis");
    if (!(sigma > 0.0)) throw std::invalid_argument("grid margin sigma must be positive");
}

ParetoFrontGrid ParetoFrontGrid::build(std::span<const GridMember> population, const GridParams& params) {
    params.validate();
    if (population.empty()) throw std::invalid_argument("grid over an empty population");
    ParetoFrontGrid g;
    g.params_ = params;
    g.ideal_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    g.nadir_ = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& m : population) {
        if (!std::isfinite(m.e1) || !std::isfinite(m.e2)) throw std::invalid_argument("grid member with non-finite fitness");
        g.ideal_ = {std::min(g.ideal_[0], m.e1), std::min(g.ideal_[1], m.e2)};
        g.nadir_ = {std::max(g.nadir_[0], m.e1), std::max(g.nadir_[1], m.e2)};
    }
    const int k[2] = {params.k1, params.k2};
    for (int j = 0; j < 2; ++j) g.delta_[j] = (g.nadir_[j] - g.ideal_[j] + 2 * params.sigma) / k[j];

    std::map<Cell, std::vector<const GridMember*>> bins;
    for (const auto& m : population) {
        Cell c = g.index_of(m.e1, m.e2);
        bins[c].push_back(&m);
        g.raw_cells_[c].push_back(m.id);
    }
    for (const auto& [cell, members] : bins) {
        std::vector<ObjectiveVector> pts;
        for (const auto* m : members) pts.push_back({m->e1, m->e2});
        auto& kept = g.cells_[cell];
        for (auto i : nondominated_indices(pts)) {
            kept.push_back(members[i]->id);
            g.elite_.push_back(members[i]->id);
        }
    }
    for (const auto& [cell, ids] : g.raw_cells_)
        for (const auto& id : ids) g.member_cell_[id] = cell;
    return g;
}

ParetoFrontGrid ParetoFrontGrid::build(std::span<const Heuristic> population, const GridParams& params) {
    std::vector<GridMember> members;
    for (const auto& h : population) {
        if (!h.fitness) throw StateError("grid over unevaluated heuristic " + h.id);
        members.push_back({h.id, h.fitness->e1, h.fitness->e2});
    }
    return build(members, params);
}

Cell ParetoFrontGrid::index_of(double e1, double e2) const {
    auto axis = [&](double e, int j, int k) {
        int g = static_cast<int>(std::floor((e - ideal_[j] + params_.sigma) / delta_[j]));
        // the bound holds analytically; rounding can push the top member to k
        return std::clamp(g, 0, k - 1);
    };
    return {axis(e1, 0, params_.k1), axis(e2, 1, params_.k2)};
}

std::optional<Cell> ParetoFrontGrid::cell_of(const std::string& id) const {
    auto it = member_cell_.find(id);
    if (it == member_cell_.end()) return std::nullopt;
    return it->second;
}

std::vector<Cell> ParetoFrontGrid::neighbors(Cell cell) const {
    if (cell.first < 0 || cell.first >= params_.k1 || cell.second < 0 || cell.second >= params_.k2)
        throw std::invalid_argument("cell outside the grid");
    std::vector<Cell> out;
    for (int d1 = -1; d1 <= 1; ++d1)
        for (int d2 = -1; d2 <= 1; ++d2) {
            if (d1 == 0 && d2 == 0) continue;
            if (!params_.moore && d1 != 0 && d2 != 0) continue;
            Cell c{cell.first + d1, cell.second + d2};
            if (cells_.count(c)) out.push_back(c);
        }
    return out;
}

MatingPool local_mating_pool(const ParetoFrontGrid& grid, Cell cell) {
    MatingPool pool;
    pool.local = true;
    pool.cell = cell;
    auto add = [&](Cell c) {
        auto it = grid.cells().find(c);
        if (it != grid.cells().end()) pool.ids.insert(pool.ids.end(), it->second.begin(), it->second.end());
    };
    add(cell);
    for (Cell c : grid.neighbors(cell)) add(c);
    return pool;
}

MatingPool select_mating_pool(const ParetoFrontGrid& grid, double epsilon, Rng& rng) {
    if (grid.cells().empty() || grid.elite().empty()) throw StateError("mating pool from an empty grid");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
    if (rng.uniform() < epsilon) {
        auto it = grid.cells().begin();
        std::advance(it, static_cast<std::ptrdiff_t>(rng.below(grid.cells().size())));
        return local_mating_pool(grid, it->first);
    }
    MatingPool pool;
    pool.ids = grid.elite();
    return pool;
}

Json grid_to_json(const ParetoFrontGrid& grid) {
    Json cells = Json::array();
    for (const auto& [cell, ids] : grid.cells()) cells.push_back({{"cell", {cell.first, cell.second}}, {"members", ids}});
    const auto& p = grid.params();
    return {{"k", {p.k1, p.k2}},          {"sigma", p.sigma},         {"moore", p.moore},
            {"ideal", grid.ideal()},      {"nadir", grid.nadir()},    {"delta", grid.delta()},
            {"cells", cells},             {"elite", grid.elite()}};
}

}  // namespace moco
