#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "moco/io.hpp"
#include "moco/metrics.hpp"
#include "moco/problems.hpp"
#include "moco/semo.hpp"

namespace moco {

struct BuiltinInfo {
    std::string id;
    Problem problem;
    std::string description;
    NeighborFn neighbor;
    /// The Python function this operator ports, as generated.
    std::string_view source;
};

/// Native ports of the reference neighbor operators, two or more per family.
const std::vector<BuiltinInfo>& builtin_catalog();
/// nullptr when unknown.
const BuiltinInfo* find_builtin(std::string_view id);
/// Catalog entry whose reference source equals `source` up to whitespace.
const BuiltinInfo* match_builtin_source(std::string_view source);

/// Archive selection weights of bitsp_weighted_reverse, normalized to sum to 1.
std::vector<double> inverse_objective_probabilities(const Archive& archive);

struct FitnessVector {
    /// Mean negative normalized hypervolume.
    double e1 = 0.0;
    /// Total SEMO runtime in seconds (virtual seconds under a virtual clock).
    double e2 = 0.0;
    std::vector<double> per_instance_hv;
    std::vector<std::uint64_t> iterations;
};

struct Lineage {
    std::vector<std::string> parents;
    /// "init", "E1", "E2", "M1", "M2" or "builtin".
    std::string op = "init";
    int generation = 0;
};

enum class BodyKind { builtin, external };

struct Heuristic {
    std::string id;
    std::string description;
    BodyKind kind = BodyKind::builtin;
    /// Catalog id for builtin bodies.
    std::string builtin_id;
    /// Generated source for external bodies, verbatim.
    std::string source;
    std::optional<FitnessVector> fitness;
    Lineage lineage;

    /// Source text shown to the model: the generated code, or the reference
    /// source of a builtin.
    std::string code() const;
};

Heuristic make_builtin_heuristic(const BuiltinInfo& info, std::string id);

/// Evaluation failed; the heuristic gets no fitness.
class EvaluationFailed : public std::runtime_error {
public:
    EvaluationFailed(const std::string& reason, std::string diagnostics)
        : std::runtime_error(reason), diagnostics_(std::move(diagnostics)) {}
    const std::string& diagnostics() const { return diagnostics_; }

private:
    std::string diagnostics_;
};

struct EvaluationSetup {
    std::vector<ProblemContext> instances;
    SemoBudget budget;
    std::uint64_t seed = 0;
    /// Replaces the tabulated frame when set.
    std::optional<metrics::ReferenceFrame> frame;
    /// Fraction of rejected candidates above which a run counts as failed.
    double infeasible_limit = 0.5;
    /// Command for external bodies that do not match a catalog source.
    std::vector<std::string> worker_command;
    double worker_grace_s = 5.0;

    Problem problem() const;
    /// Frame for instance i: the override or the tabulated frame.
    /// Throws std::invalid_argument when neither exists.
    metrics::ReferenceFrame frame_for(std::size_t i) const;
};

/// Normalized HV of an archive held in canonical orientation.
double archive_normalized_hv(std::span<const ObjectiveVector> canonical_points, const metrics::ReferenceFrame& frame);

/// Runs SEMO per instance and returns (e1, e2). Builtins and external bodies
/// whose source matches a catalog entry run natively; other external bodies
/// go to the worker. Throws EvaluationFailed.
FitnessVector evaluate_heuristic(const Heuristic& h, const EvaluationSetup& setup);

/// {id, description, kind, builtin_id | source, fitness?, lineage}
Json heuristic_to_json(const Heuristic& h);
Heuristic heuristic_from_json(const Json& doc);

/// (e1, e2) dominance; StateError when either side is unevaluated.
bool heuristic_fitness_dominates(const Heuristic& a, const Heuristic& b);

}  // namespace moco
