#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "moco/heuristics.hpp"
#include "moco/llm.hpp"
#include "moco/pfg.hpp"
#include "moco/prompts.hpp"

namespace moco {

enum class PopulationMode { trim, accumulate };

struct EvolutionConfig {
    std::size_t population = 10;
    std::size_t generations = 20;
    double epsilon = 0.9;
    double gamma = 0.3;
    double rho = 1.0;
    GridParams grid;

    Problem problem = Problem::bi_tsp;
    std::size_t instance_size = 20;
    std::size_t instance_count = 10;
    std::uint64_t instance_seed = 0;
    SemoBudget budget{2000, 60.0, false, 1e-6};

    std::uint64_t seed = 0;
    /// Init prompts allowed per population slot.
    std::size_t init_attempts = 3;
    bool builtin_fallback = true;
    PopulationMode mode = PopulationMode::trim;
    std::optional<std::size_t> cap;
    llm::ModelRoles roles;
    std::vector<std::string> worker_command;
    double worker_grace_s = 5.0;
    /// Cluster cache loaded before the run, if present.
    std::optional<std::filesystem::path> cluster_cache_in;

    /// Throws std::invalid_argument for out-of-range settings.
    void validate() const;
};

Json config_to_json(const EvolutionConfig& config);
/// Missing keys keep their defaults.
EvolutionConfig config_from_json(const Json& doc);

class InitializationFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cluster partitions keyed by cell and the pool's member ids.
class ClusterCache {
public:
    static std::string key(Cell cell, std::span<const std::string> ids);

    std::optional<std::vector<std::vector<std::string>>> find(const std::string& key) const;
    void store(const std::string& key, std::vector<std::vector<std::string>> partition);
    std::size_t size() const { return entries_.size(); }

    Json to_json() const;
    static ClusterCache from_json(const Json& doc);

private:
    std::map<std::string, std::vector<std::vector<std::string>>> entries_;
};

struct ParentChoice {
    std::vector<std::string> parents;
    bool mutation = false;
    bool local = false;
    Cell cell{0, 0};
};

struct OffspringRecord {
    std::size_t slot = 0;
    ParentChoice choice;
    std::string op;
    bool reflected = false;
    std::optional<Heuristic> child;
    std::string discard_reason;
    std::string discard_detail;
};

struct GenerationRecord {
    int generation = 0;
    std::vector<OffspringRecord> offspring;
    std::vector<Heuristic> population;
    Json grid;
};

Json generation_to_json(const GenerationRecord& record);

/// Non-dominated subset in (e1, e2), preserving order. Equal points are kept.
std::vector<Heuristic> fitness_front(std::span<const Heuristic> population);

/// Keeps the front; refills to two members from the dominated rest by
/// (dominators, shared cell with a kept member, id).
std::vector<Heuristic> trim_population(std::span<const Heuristic> population, const GridParams& grid);

/// Keeps `cap` members, taking one per grid cell per round in cell order.
std::vector<Heuristic> cap_population(std::span<const Heuristic> population, std::size_t cap,
                                      const GridParams& grid);

class EvolutionEngine {
public:
    /// Throws std::invalid_argument on a bad config.
    EvolutionEngine(EvolutionConfig config, llm::Backend& backend);

    const EvolutionConfig& config() const { return config_; }
    const EvaluationSetup& setup() const { return setup_; }
    const std::vector<Heuristic>& population() const { return population_; }
    ClusterCache& cluster_cache() { return cache_; }
    std::size_t cluster_calls() const { return cluster_calls_; }

    /// Fills the population from init prompts, then from the builtin catalog.
    /// InitializationFailed when fewer than two members result.
    const std::vector<Heuristic>& initialize();

    /// Partition of `pool` (indices). A single member needs no call; an
    /// unparseable reply is retried once, then every member is its own cluster.
    std::vector<std::vector<int>> semantic_cluster(std::span<const Heuristic> pool, Cell cell);

    ParentChoice select_parents(const ParetoFrontGrid& grid, Rng& rng);

    OffspringRecord make_offspring(const ParentChoice& choice, int generation, std::size_t slot, Rng& rng);

    /// One generation numbered from 1. StateError before initialize().
    GenerationRecord step(int generation);

    /// Replaces the population, e.g. to resume from a saved generation.
    void set_population(std::vector<Heuristic> population);

private:
    const Heuristic& member(const std::string& id) const;

    EvolutionConfig config_;
    llm::Backend& backend_;
    EvaluationSetup setup_;
    std::vector<Heuristic> population_;
    ClusterCache cache_;
    std::size_t cluster_calls_ = 0;
};

/// Canned responses built from the builtin catalog of `problem`: init and
/// variation replies carry builtin sources, cluster replies pair the first
/// two snippets, reflection replies carry one fixed suggestion.
std::map<llm::Purpose, std::vector<std::string>> default_mock_table(Problem problem);

struct EvolutionOutcome {
    std::vector<Heuristic> initial;
    std::vector<Heuristic> population;
    std::vector<Heuristic> front;
    std::vector<GenerationRecord> generations;
};

/// Full run. With `run_dir` set, writes config.json, initial_population.json,
/// generations/gen_NNN.json, transcript.jsonl, cluster_cache.json,
/// pareto_front.json and metrics.csv.
EvolutionOutcome run_evolution(const EvolutionConfig& config, llm::Backend& backend,
                               const std::optional<std::filesystem::path>& run_dir = std::nullopt);

}  // namespace moco
