#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "moco/core.hpp"
#include "moco/problems.hpp"

namespace moco::metrics {

enum class Orientation { minimize, maximize };

/// Reference point r and ideal point z. For minimization z < r component-wise;
/// for maximization z > r.
struct ReferenceFrame {
    ObjectiveVector reference;
    ObjectiveVector ideal;
    Orientation orientation = Orientation::minimize;

    /// Throws std::invalid_argument when sizes differ or some r_i == z_i.
    void validate() const;
    /// The same frame mapped into minimization by negation (identity when
    /// already minimizing).
    ReferenceFrame canonical() const;
};

/// Frames used for normalized HV per benchmark and size; nullopt for sizes
/// without a tabulated frame. Bi-KP frames are in profit (maximization) units.
std::optional<ReferenceFrame> reference_frame(Problem problem, std::size_t n);

/// Exact dominated volume of the union of boxes [p, r] for M = 2 or 3
/// (minimization). Points not strictly better than r in every coordinate
/// contribute nothing. Throws std::invalid_argument for other dimensions.
double hypervolume_exact(std::span<const ObjectiveVector> points, std::span<const double> reference);

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Uniform sampling over the box [component-wise min(points), r].
MonteCarloEstimate hypervolume_mc(std::span<const ObjectiveVector> points, std::span<const double> reference,
                                  std::uint64_t samples, std::uint64_t seed);

/// HV_r(F) / prod |r_i - z_i|; `points` are in the frame's orientation.
double normalized_hv(std::span<const ObjectiveVector> points, const ReferenceFrame& frame);

struct LabeledFront {
    std::string label;
    std::vector<ObjectiveVector> points;
};

struct NormalizedFronts {
    std::vector<LabeledFront> fronts;
    ObjectiveVector ideal;
    ObjectiveVector nadir;
    /// (1.1, ..., 1.1)
    ObjectiveVector reference;
};

/// Min-max normalization against the ideal/nadir of the union of all fronts.
/// Throws std::invalid_argument when a dimension has zero range or sizes differ.
NormalizedFronts normalize_fronts(std::span<const LabeledFront> fronts);

/// Mean distance from each q in Q to its nearest p in P. Empty P yields
/// +infinity; empty Q throws std::invalid_argument.
double igd(std::span<const ObjectiveVector> front, std::span<const ObjectiveVector> reference_front);

/// Shannon entropy (natural log) of the cluster-size distribution of `labels`.
double swdi(std::span<const int> labels);

/// Greedy leader clustering in input order: join the first leader with
/// cosine similarity >= threshold, else become a new leader.
std::vector<int> cosine_leader_cluster(std::span<const std::vector<double>> vectors, double threshold = 0.9);

/// Entropy of normalized Euclidean MST edge lengths; 0 when all points coincide.
double cdi(std::span<const std::vector<double>> vectors);

/// Sum of |f'_m - 1/2| over a normalized point; components must lie in [0, 1].
double knee_score(std::span<const double> normalized_point);

/// Deterministic token-frequency vector of source text (hashed into `dim` buckets).
std::vector<double> source_vector(std::string_view source, std::size_t dim = 256);

}  // namespace moco::metrics
