#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "moco/pareto.hpp"
#include "moco/problems.hpp"

namespace moco {

/// Stopping bounds for one SEMO run.
///
/// With `virtual_clock` set, elapsed time is a deterministic cost proxy:
/// every iteration and every archive dominance test costs `seconds_per_op`.
/// The time limit is then applied to that proxy, so runs are reproducible.
struct SemoBudget {
    std::optional<std::uint64_t> max_iterations;
    std::optional<double> time_limit_s;
    bool virtual_clock = false;
    double seconds_per_op = 1e-6;

    /// Throws std::invalid_argument unless at least one bound is set and the
    /// time limit (if any) is positive.
    void validate() const;
};

/// A neighbor procedure: picks from the archive and returns a new candidate.
using NeighborFn = std::function<Solution(const Archive&, const ProblemContext&, Rng&)>;

struct SemoResult {
    Archive archive;
    std::uint64_t iterations = 0;
    double elapsed_s = 0.0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected_infeasible = 0;
    /// 1 where the iteration's candidate entered the archive.
    std::vector<std::uint8_t> acceptance_trace;
};

/// The neighbor procedure threw; the run was aborted.
class HeuristicFault : public std::runtime_error {
public:
    HeuristicFault(const std::string& what, std::uint64_t iteration)
        : std::runtime_error(what), iteration_(iteration) {}
    std::uint64_t iteration() const { return iteration_; }

private:
    std::uint64_t iteration_;
};

/// Runs SEMO from one random solution. Infeasible candidates are counted and
/// discarded; exceptions from `neighbor` abort with HeuristicFault.
SemoResult run_semo(const ProblemContext& context, const NeighborFn& neighbor, const SemoBudget& budget,
                    std::uint64_t seed);

/// Plain SEMO mutation on a uniformly chosen archive member: swap two tour
/// positions, flip one bit with random-drop repair, or swap two customers
/// across routes (reverting when capacity breaks).
Solution default_neighbor(const Archive& archive, const ProblemContext& context, Rng& rng);

}  // namespace moco
