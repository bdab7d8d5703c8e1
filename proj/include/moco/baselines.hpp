#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "moco/io.hpp"
#include "moco/pareto.hpp"
#include "moco/semo.hpp"

namespace moco::baselines {

/// Front index per individual (0 = non-dominated).
std::vector<int> fast_nondominated_sort(std::span<const ObjectiveVector> points);

/// Crowding distance within one front; boundary members get +infinity.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

struct RankKey {
    int rank = 0;
    double crowding = 0.0;
    std::size_t id = 0;
};

/// Lexicographic (rank, -crowding, id); a strict weak ordering.
bool tournament_less(const RankKey& a, const RankKey& b);

/// Partially mapped crossover keeping p1[cut1..cut2] (inclusive).
std::vector<int> pmx(const std::vector<int>& p1, const std::vector<int>& p2, std::size_t cut1, std::size_t cut2);
std::vector<int> pmx(const std::vector<int>& p1, const std::vector<int>& p2, Rng& rng);
void swap_mutation(std::vector<int>& perm, Rng& rng);

std::vector<std::uint8_t> uniform_crossover(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b,
                                            Rng& rng);
/// Flips each bit with probability `rate`, then drops random items until the
/// selection fits.
void bit_flip_repair(std::vector<std::uint8_t>& bits, double rate, const KpInstance& instance, Rng& rng);

/// Splits a customer permutation into routes, opening a new route whenever the
/// next customer would exceed capacity.
Routes split_giant_tour(const std::vector<int>& customers, const CvrpInstance& instance);

/// Permutation (tour or CVRP giant tour) or bit vector.
struct Genome {
    std::vector<int> perm;
    std::vector<std::uint8_t> bits;
};

Solution decode(const Genome& genome, const ProblemContext& context);
Genome random_genome(const ProblemContext& context, Rng& rng);

struct VariationParams {
    double crossover_rate = 0.9;
    /// Probability of one swap per permutation child.
    double swap_rate = 0.2;
    /// Per-bit flip rate; 0 means 1/n.
    double bit_rate = 0.0;
};

struct BaselineResult {
    std::string algorithm;
    Archive front;
    std::uint64_t evaluations = 0;
    double elapsed_s = 0.0;
    Json params;
};

Json baseline_result_to_json(const BaselineResult& result);

struct Nsga2Params {
    std::size_t pop_size = 300;
    std::size_t generations = 300;
    VariationParams variation;
};

BaselineResult nsga2_run(const ProblemContext& context, const Nsga2Params& params, std::uint64_t seed);

struct WeightVectorSet {
    std::vector<ObjectiveVector> weights;
    std::vector<std::vector<std::size_t>> neighborhoods;
};

/// Simplex lattice. M = 2 yields exactly K vectors; M = 3 uses the largest
/// lattice with at most K points. Throws for K < M or M outside {2, 3}.
WeightVectorSet make_weight_vectors(std::size_t k, std::size_t m, std::size_t t);

enum class Scalarization { weighted_sum, tchebycheff, pbi };

double scalarize(Scalarization kind, std::span<const double> f, std::span<const double> lambda,
                 std::span<const double> ideal, double theta = 5.0);

struct MoeadParams {
    std::size_t subproblems = 300;
    std::size_t neighborhood = 20;
    std::size_t generations = 300;
    Scalarization kind = Scalarization::tchebycheff;
    double theta = 5.0;
    VariationParams variation;
};

/// Replaces incumbents in `neighborhood` whose scalarized value the child
/// improves. Returns the replaced indices.
std::vector<std::size_t> moead_update(const ObjectiveVector& child, std::span<const std::size_t> neighborhood,
                                      const WeightVectorSet& weights, std::vector<ObjectiveVector>& incumbents,
                                      std::span<const double> ideal, Scalarization kind, double theta);

struct MoeadTrace {
    /// Ideal point after each generation.
    std::vector<ObjectiveVector> ideal_history;
};

BaselineResult moead_run(const ProblemContext& context, const MoeadParams& params, std::uint64_t seed,
                         MoeadTrace* trace = nullptr);

/// 20,000 iterations for TSP families, 10,000 otherwise.
std::uint64_t semo_baseline_iterations(Problem problem);
BaselineResult semo_baseline(const ProblemContext& context, std::uint64_t seed);

}  // namespace moco::baselines
