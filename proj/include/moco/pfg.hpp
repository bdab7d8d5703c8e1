#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "moco/core.hpp"
#include "moco/heuristics.hpp"
#include "moco/io.hpp"

namespace moco {

struct GridParams {
    int k1 = 4;
    int k2 = 4;
    double sigma = 1e-6;
    /// Include diagonal cells as neighbors.
    bool moore = false;

    void validate() const;
};

/// A heuristic's position in fitness space.
struct GridMember {
    std::string id;
    double e1 = 0.0;
    double e2 = 0.0;
};

using Cell = std::pair<int, int>;

class ParetoFrontGrid {
public:
    /// Throws std::invalid_argument on an empty population or bad parameters.
    static ParetoFrontGrid build(std::span<const GridMember> population, const GridParams& params);
    /// Same, from evaluated heuristics; StateError for an unevaluated member.
    static ParetoFrontGrid build(std::span<const Heuristic> population, const GridParams& params);

    const GridParams& params() const { return params_; }
    const std::array<double, 2>& ideal() const { return ideal_; }
    const std::array<double, 2>& nadir() const { return nadir_; }
    const std::array<double, 2>& delta() const { return delta_; }

    /// Cell of a fitness point, clamped into the grid.
    Cell index_of(double e1, double e2) const;

    /// Occupied cells and their non-dominated members, in cell order.
    const std::map<Cell, std::vector<std::string>>& cells() const { return cells_; }
    /// Members before the per-cell filter.
    const std::map<Cell, std::vector<std::string>>& raw_cells() const { return raw_cells_; }
    /// Union of all cell members, ordered by cell then insertion.
    const std::vector<std::string>& elite() const { return elite_; }
    /// Cell holding `id`, if the member is in the grid.
    std::optional<Cell> cell_of(const std::string& id) const;

    /// Occupied axis-adjacent cells (plus diagonals in Moore mode).
    /// Throws std::invalid_argument for cells outside the grid.
    std::vector<Cell> neighbors(Cell cell) const;

private:
    GridParams params_;
    std::array<double, 2> ideal_{};
    std::array<double, 2> nadir_{};
    std::array<double, 2> delta_{};
    std::map<Cell, std::vector<std::string>> cells_;
    std::map<Cell, std::vector<std::string>> raw_cells_;
    std::map<std::string, Cell> member_cell_;
    std::vector<std::string> elite_;
};

struct MatingPool {
    std::vector<std::string> ids;
    bool local = false;
    /// The sampled cell when local.
    Cell cell{0, 0};
};

/// Members of `cell` and of its occupied neighbors.
MatingPool local_mating_pool(const ParetoFrontGrid& grid, Cell cell);

/// With probability epsilon the members of a uniformly drawn occupied cell and
/// its neighbors, otherwise the whole elite set.
MatingPool select_mating_pool(const ParetoFrontGrid& grid, double epsilon, Rng& rng);

Json grid_to_json(const ParetoFrontGrid& grid);

}  // namespace moco
