#pragma once

// Brute-force reference implementations used as test oracles.

#include <algorithm>
#include <vector>

#include "moco/core.hpp"

namespace oracle {

using moco::ObjectiveVector;

inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    bool strict = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
        strict = strict || a[k] < b[k];
    }
    return strict;
}

inline std::vector<ObjectiveVector> filter(const std::vector<ObjectiveVector>& pts) {
    std::vector<ObjectiveVector> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size() && !dominated; ++j) dominated = j != i && dominates(pts[j], pts[i]);
        if (!dominated) out.push_back(pts[i]);
    }
    return out;
}

inline bool mutually_nondominated(const std::vector<ObjectiveVector>& pts) { return filter(pts).size() == pts.size(); }

// Union volume of boxes [p, r] by inclusion-exclusion over all subsets.
inline double hv_inclusion_exclusion(const std::vector<ObjectiveVector>& pts, const ObjectiveVector& r) {
    const std::size_t n = pts.size();
    double total = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        ObjectiveVector corner(r.size(), -1e300);
        int bits = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) {
                ++bits;
                for (std::size_t k = 0; k < r.size(); ++k) corner[k] = std::max(corner[k], pts[i][k]);
            }
        double vol = 1.0;
        for (std::size_t k = 0; k < r.size(); ++k) vol *= std::max(0.0, r[k] - corner[k]);
        total += bits % 2 ? vol : -vol;
    }
    return total;
}

// Front index by repeatedly peeling the non-dominated layer.
inline std::vector<int> peel_ranks(const std::vector<ObjectiveVector>& pts) {
    std::vector<int> rank(pts.size(), -1);
    std::size_t left = pts.size();
    for (int layer = 0; left > 0; ++layer) {
        std::vector<std::size_t> now;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (rank[i] >= 0) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
                dominated = rank[j] < 0 && j != i && dominates(pts[j], pts[i]);
            if (!dominated) now.push_back(i);
        }
        for (auto i : now) rank[i] = layer;
        left -= now.size();
    }
    return rank;
}

inline std::vector<ObjectiveVector> random_points(moco::Rng& rng, std::size_t n, std::size_t m) {
    std::vector<ObjectiveVector> pts(n, ObjectiveVector(m));
    for (auto& p : pts)
        for (auto& v : p) v = rng.uniform();
    return pts;
}

}  // namespace oracle
