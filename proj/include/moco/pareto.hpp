#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "moco/core.hpp"
#include "moco/problems.hpp"

namespace moco {

/// a <= b component-wise with at least one strict <.
/// Throws std::invalid_argument on length mismatch.
bool dominates(std::span<const double> a, std::span<const double> b);

/// Indices (ascending) of points not dominated by any other input point.
/// Pairwise O(n^2); equal points do not dominate each other.
std::vector<std::size_t> nondominated_indices(std::span<const ObjectiveVector> points);
std::vector<ObjectiveVector> nondominated_filter(std::span<const ObjectiveVector> points);
bool mutually_nondominated(std::span<const ObjectiveVector> points);

struct ArchiveEntry {
    Solution solution;
    ObjectiveVector objectives;
};

/// Mutually non-dominated set of (solution, objectives) pairs.
///
/// By default a candidate whose objective vector equals a stored one is
/// rejected, which keeps the archive a set in objective space.
class Archive {
public:
    explicit Archive(bool admit_duplicates = false) : admit_duplicates_(admit_duplicates) {}

    /// Inserts unless some entry dominates (or, by default, equals) the candidate;
    /// removes every entry the candidate dominates. Returns whether it was inserted.
    bool insert(Solution solution, ObjectiveVector objectives);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const ArchiveEntry& operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<ArchiveEntry>& entries() const { return entries_; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    std::vector<ObjectiveVector> objectives() const;

    /// Successful insertions since construction.
    std::uint64_t insertions() const { return insertions_; }
    /// Dominance tests performed since construction (virtual-clock cost unit).
    std::uint64_t comparisons() const { return comparisons_; }
    bool admits_duplicates() const { return admit_duplicates_; }

private:
    std::vector<ArchiveEntry> entries_;
    bool admit_duplicates_;
    std::uint64_t insertions_ = 0;
    std::uint64_t comparisons_ = 0;
};

}  // namespace moco
