#include "moco/pareto.hpp"

#include <algorithm>
#include <stdexcept>

namespace moco {

bool dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dominates: objective vectors differ in length");
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

std::vector<std::size_t> nondominated_indices(std::span<const ObjectiveVector> points) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < points.size() && !dominated; ++j)
            dominated = j != i && dominates(points[j], points[i]);
        if (!dominated) keep.push_back(i);
    }
    return keep;
}

std::vector<ObjectiveVector> nondominated_filter(std::span<const ObjectiveVector> points) {
    std::vector<ObjectiveVector> out;
    for (auto i : nondominated_indices(points)) out.push_back(points[i]);
    return out;
}

bool mutually_nondominated(std::span<const ObjectiveVector> points) {
    return nondominated_indices(points).size() == points.size();
}

bool Archive::insert(Solution solution, ObjectiveVector objectives) {
    for (const auto& e : entries_) {
        ++comparisons_;
        if (dominates(e.objectives, objectives)) return false;
        if (!admit_duplicates_ && e.objectives == objectives) return false;
    }
    std::erase_if(entries_, [&](const ArchiveEntry& e) { return dominates(objectives, e.objectives); });
    entries_.push_back({std::move(solution), std::move(objectives)});
    ++insertions_;
    return true;
}

std::vector<ObjectiveVector> Archive::objectives() const {
    std::vector<ObjectiveVector> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.objectives);
    return out;
}

}  // namespace moco
