#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace moco {

/// Objective values in canonical (minimization) orientation.
using ObjectiveVector = std::vector<double>;

/// A solution violates an invariant of its encoding or a problem constraint.
class FeasibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was invoked on an object that is not in the required state.
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Mixes a base seed with stream coordinates (splitmix64 finalizer per part).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

/// Random source used across the engine.
///
/// The standard distributions are implementation-defined, so every draw goes
/// through the helpers below, which only rely on the raw 64-bit engine output.
/// Results are therefore identical across standard libraries for a seed.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, n); n must be positive.
    std::size_t below(std::size_t n);
    /// Uniform integer in [lo, hi] inclusive.
    int range(int lo, int hi);
    bool bernoulli(double p) { return uniform() < p; }

    /// Index drawn with probability proportional to weights.
    /// Throws std::invalid_argument when weights are negative or sum to zero.
    std::size_t weighted(std::span<const double> weights);

    /// k distinct values from [0, n) in selection order.
    std::vector<std::size_t> sample(std::size_t n, std::size_t k);

    template <class RandomIt>
    void shuffle(RandomIt first, RandomIt last) {
        auto n = static_cast<std::size_t>(last - first);
        for (std::size_t i = n; i > 1; --i) {
            std::size_t j = below(i);
            using std::swap;
            swap(first[i - 1], first[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace moco
