#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "moco/core.hpp"

namespace moco {

enum class Problem { bi_tsp, tri_tsp, bi_cvrp, bi_kp };

/// "bitsp", "tritsp", "bicvrp", "bikp".
std::string_view problem_tag(Problem p);
/// Inverse of problem_tag; throws std::invalid_argument on unknown tags.
Problem parse_problem(std::string_view tag);
std::size_t objective_count(Problem p);

/// Multi-objective TSP: each node has one planar point per objective.
struct TspInstance {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::size_t m = 2;
    /// Row-major, n rows of (x1, y1, ..., xm, ym).
    std::vector<double> coords;

    double x(std::size_t node, std::size_t objective) const { return coords[node * 2 * m + 2 * objective]; }
    double y(std::size_t node, std::size_t objective) const { return coords[node * 2 * m + 2 * objective + 1]; }
};

/// Bi-objective CVRP. Node 0 is the depot; customers are 1..n.
struct CvrpInstance {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    /// (n + 1) rows of (x, y).
    std::vector<double> coords;
    /// Integer demands as drawn; raw_demand[0] == 0.
    std::vector<int> raw_demand;
    /// raw_demand / capacity.
    std::vector<double> demand;
    /// Vehicle capacity in raw demand units.
    int capacity = 0;
};

/// Bi-objective 0/1 knapsack.
struct KpInstance {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::vector<double> weights;
    std::array<std::vector<double>, 2> profits;
    double capacity = 0.0;
};

using Instance = std::variant<TspInstance, CvrpInstance, KpInstance>;

Problem problem_of(const Instance& instance);
std::size_t size_of(const Instance& instance);

struct Tour {
    std::vector<int> order;
    friend bool operator==(const Tour&, const Tour&) = default;
};

/// Each route starts and ends at depot 0.
struct Routes {
    std::vector<std::vector<int>> routes;
    friend bool operator==(const Routes&, const Routes&) = default;
};

struct Selection {
    std::vector<std::uint8_t> bits;
    friend bool operator==(const Selection&, const Selection&) = default;
};

using Solution = std::variant<Tour, Routes, Selection>;

TspInstance generate_motsp(std::size_t n, std::size_t m, std::uint64_t seed);
CvrpInstance generate_mocvrp(std::size_t n, std::uint64_t seed);
KpInstance generate_mokp(std::size_t n, std::uint64_t seed);
Instance generate_instance(Problem problem, std::size_t n, std::uint64_t seed);

/// 30 / 40 / 50 by size band; throws outside 20 <= n <= 100.
int cvrp_capacity_for(std::size_t n);
/// 12.5 / 25 by size band; throws outside 50 <= n <= 200.
double kp_capacity_for(std::size_t n);

/// Dense symmetric matrix of Euclidean distances.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::size_t n, std::vector<double> data) : n_(n), data_(std::move(data)) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Distances in objective space `objective` (zero-based).
DistanceMatrix distance_matrix(const TspInstance& instance, std::size_t objective);
DistanceMatrix distance_matrix(const CvrpInstance& instance);

ObjectiveVector eval_motsp(const Tour& tour, const TspInstance& instance);
/// (total distance, makespan).
ObjectiveVector eval_mocvrp(const Routes& routes, const CvrpInstance& instance);
/// Negated profits, the canonical minimization view.
ObjectiveVector eval_mokp(const Selection& selection, const KpInstance& instance);
/// Profits as reported (maximization units).
std::array<double, 2> kp_raw_profits(const Selection& selection, const KpInstance& instance);

/// First violated invariant, or nullopt when feasible.
/// Throws std::invalid_argument when the encoding does not fit the instance family.
std::optional<std::string> validate_solution(const Solution& solution, const Instance& instance);

/// Uniformly random feasible solution for the instance.
Solution random_solution(const Instance& instance, Rng& rng);

/// Instance plus the distance tables heuristics read from.
class ProblemContext {
public:
    explicit ProblemContext(Instance instance);

    const Instance& instance() const { return instance_; }
    Problem problem() const { return problem_; }
    std::size_t size() const { return size_of(instance_); }
    std::size_t objectives() const { return objective_count(problem_); }

    /// TSP: one matrix per objective. CVRP: a single matrix at index 0.
    const DistanceMatrix& distances(std::size_t objective = 0) const { return matrices_.at(objective); }

    const TspInstance& tsp() const { return std::get<TspInstance>(instance_); }
    const CvrpInstance& cvrp() const { return std::get<CvrpInstance>(instance_); }
    const KpInstance& kp() const { return std::get<KpInstance>(instance_); }

    std::optional<std::string> validate(const Solution& solution) const;
    /// Throws FeasibilityError for infeasible solutions.
    ObjectiveVector evaluate(const Solution& solution) const;

private:
    Instance instance_;
    Problem problem_;
    std::vector<DistanceMatrix> matrices_;
};

}  // namespace moco
