#include "moco/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace moco::metrics {

namespace {

struct P2 {
    double x, y;
};

/// Sweep over x; `pts` must already be strictly inside the reference box.
double hv2d_sorted(std::vector<P2>& pts, double rx, double ry) {
    std::sort(pts.begin(), pts.end(), [](const P2& a, const P2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    double area = 0.0;
    double floor_y = ry;
    for (const auto& p : pts) {
        if (p.y < floor_y) {
            area += (rx - p.x) * (floor_y - p.y);
            floor_y = p.y;
        }
    }
    return area;
}

bool strictly_inside(std::span<const double> p, std::span<const double> r) {
    for (std::size_t i = 0; i < r.size(); ++i)
        if (!(p[i] < r[i])) return false;
    return true;
}

double hv2d(std::span<const ObjectiveVector> points, std::span<const double> r) {
    std::vector<P2> pts;
    for (const auto& p : points)
        if (strictly_inside(p, r)) pts.push_back({p[0], p[1]});
    return hv2d_sorted(pts, r[0], r[1]);
}

/// Dimension sweep over z with a maintained 2-D staircase (x ascending, y descending).
double hv3d(std::span<const ObjectiveVector> points, std::span<const double> r) {
    std::vector<ObjectiveVector> pts;
    for (const auto& p : points)
        if (strictly_inside(p, r)) pts.push_back(p);
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });

    std::vector<P2> stair;
    double area = 0.0;
    double volume = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        P2 q{pts[i][0], pts[i][1]};
        bool covered = std::any_of(stair.begin(), stair.end(), [&](const P2& s) { return s.x <= q.x && s.y <= q.y; });
        if (!covered) {
            std::erase_if(stair, [&](const P2& s) { return q.x <= s.x && q.y <= s.y; });
            stair.push_back(q);
            std::vector<P2> tmp = stair;
            area = hv2d_sorted(tmp, r[0], r[1]);
            stair = std::move(tmp);
        }
        const double next_z = i + 1 < pts.size() ? pts[i + 1][2] : r[2];
        volume += area * (next_z - pts[i][2]);
    }
    return volume;
}

void check_dimension(std::span<const ObjectiveVector> points, std::span<const double> r) {
    if (r.size() != 2 && r.size() != 3) throw std::invalid_argument("hypervolume: unsupported dimension (need 2 or 3)");
    for (const auto& p : points)
        if (p.size() != r.size()) throw std::invalid_argument("hypervolume: point dimension differs from reference");
}

double entropy_of(std::span<const double> weights) {
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) return 0.0;
    double h = 0.0;
    for (double w : weights) {
        if (w <= 0.0) continue;
        double p = w / total;
        h -= p * std::log(p);
    }
    return h;
}

}  // namespace

void ReferenceFrame::validate() const {
    if (reference.size() != ideal.size() || reference.empty())
        throw std::invalid_argument("reference frame: reference and ideal differ in size");
    for (std::size_t i = 0; i < reference.size(); ++i)
        if (reference[i] == ideal[i]) throw std::invalid_argument("reference frame: degenerate (r_i == z_i)");
}

ReferenceFrame ReferenceFrame::canonical() const {
    if (orientation == Orientation::minimize) return *this;
    ReferenceFrame out{reference, ideal, Orientation::minimize};
    for (auto& v : out.reference) v = -v;
    for (auto& v : out.ideal) v = -v;
    return out;
}

std::optional<ReferenceFrame> reference_frame(Problem problem, std::size_t n) {
    auto uniform = [](double r, double z, std::size_t m, Orientation o) {
        return ReferenceFrame{ObjectiveVector(m, r), ObjectiveVector(m, z), o};
    };
    switch (problem) {
        case Problem::bi_tsp:
        case Problem::tri_tsp: {
            const std::size_t m = objective_count(problem);
            static const std::map<std::size_t, double> bi{{20, 20}, {50, 35}, {100, 65}, {150, 85}, {200, 115}};
            static const std::map<std::size_t, double> tri{{20, 20}, {50, 35}, {100, 65}};
            const auto& table = problem == Problem::bi_tsp ? bi : tri;
            auto it = table.find(n);
            if (it == table.end()) return std::nullopt;
            return uniform(it->second, 0.0, m, Orientation::minimize);
        }
        case Problem::bi_cvrp: {
            static const std::map<std::size_t, double> total{{20, 30}, {50, 45}, {100, 80}};
            auto it = total.find(n);
            if (it == total.end()) return std::nullopt;
            return ReferenceFrame{{it->second, 8.0}, {0.0, 0.0}, Orientation::minimize};
        }
        case Problem::bi_kp: {
            static const std::map<std::size_t, std::pair<double, double>> kp{{50, {5, 30}}, {100, {20, 50}}, {200, {30, 75}}};
            auto it = kp.find(n);
            if (it == kp.end()) return std::nullopt;
            return uniform(it->second.first, it->second.second, 2, Orientation::maximize);
        }
    }
    return std::nullopt;
}

double hypervolume_exact(std::span<const ObjectiveVector> points, std::span<const double> reference) {
    check_dimension(points, reference);
    return reference.size() == 2 ? hv2d(points, reference) : hv3d(points, reference);
}

MonteCarloEstimate hypervolume_mc(std::span<const ObjectiveVector> points, std::span<const double> reference,
                                  std::uint64_t samples, std::uint64_t seed) {
    check_dimension(points, reference);
    const std::size_t m = reference.size();
    if (points.empty() || samples == 0) return {};
    ObjectiveVector lo(m, std::numeric_limits<double>::infinity());
    for (const auto& p : points)
        for (std::size_t i = 0; i < m; ++i) lo[i] = std::min(lo[i], p[i]);
    double box = 1.0;
    for (std::size_t i = 0; i < m; ++i) box *= std::max(0.0, reference[i] - lo[i]);
    if (!(box > 0.0)) return {};

    Rng rng(seed);
    std::uint64_t hits = 0;
    ObjectiveVector u(m);
    if (m == 2) {
        // staircase sorted by x, y decreasing: a sample is dominated iff the last
        // point with x <= u.x has y <= u.y
        std::vector<P2> stair;
        for (const auto& p : points) stair.push_back({p[0], p[1]});
        std::sort(stair.begin(), stair.end(), [](const P2& a, const P2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
        std::vector<P2> front;
        for (const auto& p : stair)
            if (front.empty() || p.y < front.back().y) front.push_back(p);
        for (std::uint64_t s = 0; s < samples; ++s) {
            double ux = lo[0] + rng.uniform() * (reference[0] - lo[0]);
            double uy = lo[1] + rng.uniform() * (reference[1] - lo[1]);
            auto it = std::upper_bound(front.begin(), front.end(), ux, [](double v, const P2& p) { return v < p.x; });
            if (it != front.begin() && std::prev(it)->y <= uy) ++hits;
        }
    } else {
        for (std::uint64_t s = 0; s < samples; ++s) {
            for (std::size_t i = 0; i < m; ++i) u[i] = lo[i] + rng.uniform() * (reference[i] - lo[i]);
            for (const auto& p : points) {
                if (p[0] <= u[0] && p[1] <= u[1] && p[2] <= u[2]) {
                    ++hits;
                    break;
                }
            }
        }
    }
    const double n = static_cast<double>(samples);
    const double frac = static_cast<double>(hits) / n;
    return {frac * box, box * std::sqrt(frac * (1.0 - frac) / n)};
}

double normalized_hv(std::span<const ObjectiveVector> points, const ReferenceFrame& frame) {
    frame.validate();
    const ReferenceFrame canon = frame.canonical();
    double scale = 1.0;
    for (std::size_t i = 0; i < canon.reference.size(); ++i) scale *= std::abs(canon.reference[i] - canon.ideal[i]);
    if (frame.orientation == Orientation::minimize) return hypervolume_exact(points, canon.reference) / scale;
    std::vector<ObjectiveVector> flipped(points.begin(), points.end());
    for (auto& p : flipped)
        for (auto& v : p) v = -v;
    return hypervolume_exact(flipped, canon.reference) / scale;
}

NormalizedFronts normalize_fronts(std::span<const LabeledFront> fronts) {
    NormalizedFronts out;
    std::size_t m = 0;
    for (const auto& f : fronts)
        for (const auto& p : f.points) {
            if (m == 0) {
                m = p.size();
                out.ideal.assign(m, std::numeric_limits<double>::infinity());
                out.nadir.assign(m, -std::numeric_limits<double>::infinity());
            }
            if (p.size() != m) throw std::invalid_argument("normalize_fronts: dimension mismatch");
            for (std::size_t i = 0; i < m; ++i) {
                out.ideal[i] = std::min(out.ideal[i], p[i]);
                out.nadir[i] = std::max(out.nadir[i], p[i]);
            }
        }
    if (m == 0) throw std::invalid_argument("normalize_fronts: no points");
    for (std::size_t i = 0; i < m; ++i)
        if (!(out.nadir[i] > out.ideal[i])) throw std::invalid_argument("normalize_fronts: degenerate dimension");
    out.reference.assign(m, 1.1);
    for (const auto& f : fronts) {
        LabeledFront nf{f.label, {}};
        for (const auto& p : f.points) {
            ObjectiveVector q(m);
            for (std::size_t i = 0; i < m; ++i) q[i] = (p[i] - out.ideal[i]) / (out.nadir[i] - out.ideal[i]);
            nf.points.push_back(std::move(q));
        }
        out.fronts.push_back(std::move(nf));
    }
    return out;
}

double igd(std::span<const ObjectiveVector> front, std::span<const ObjectiveVector> reference_front) {
    if (reference_front.empty()) throw std::invalid_argument("igd: empty reference front");
    if (front.empty()) return std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& q : reference_front) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : front) {
            if (p.size() != q.size()) throw std::invalid_argument("igd: dimension mismatch");
            double d2 = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) d2 += (q[i] - p[i]) * (q[i] - p[i]);
            best = std::min(best, d2);
        }
        sum += std::sqrt(best);
    }
    return sum / static_cast<double>(reference_front.size());
}

double swdi(std::span<const int> labels) {
    std::map<int, double> counts;
    for (int l : labels) counts[l] += 1.0;
    std::vector<double> sizes;
    for (const auto& [label, c] : counts) sizes.push_back(c);
    return entropy_of(sizes);
}

std::vector<int> cosine_leader_cluster(std::span<const std::vector<double>> vectors, double threshold) {
    auto norm = [](const std::vector<double>& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); };
    std::vector<std::size_t> leaders;
    std::vector<double> leader_norms;
    std::vector<int> labels;
    labels.reserve(vectors.size());
    for (const auto& v : vectors) {
        const double nv = norm(v);
        if (!(nv > 0.0)) throw std::invalid_argument("cosine_leader_cluster: zero vector");
        int label = -1;
        for (std::size_t k = 0; k < leaders.size() && label < 0; ++k) {
            const auto& l = vectors[leaders[k]];
            if (l.size() != v.size()) throw std::invalid_argument("cosine_leader_cluster: dimension mismatch");
            double cos = std::inner_product(v.begin(), v.end(), l.begin(), 0.0) / (nv * leader_norms[k]);
            if (cos >= threshold) label = static_cast<int>(k);
        }
        if (label < 0) {
            label = static_cast<int>(leaders.size());
            leaders.push_back(static_cast<std::size_t>(&v - vectors.data()));
            leader_norms.push_back(nv);
        }
        labels.push_back(label);
    }
    return labels;
}

double cdi(std::span<const std::vector<double>> vectors) {
    const std::size_t n = vectors.size();
    if (n < 2) throw std::invalid_argument("cdi: need at least two vectors");
    auto dist = [&](std::size_t a, std::size_t b) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < vectors[a].size(); ++i) {
            double d = vectors[a][i] - vectors[b][i];
            d2 += d * d;
        }
        return std::sqrt(d2);
    };
    // Prim on the complete graph
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<char> in_tree(n, 0);
    std::vector<double> edges;
    best[0] = 0.0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t u = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!in_tree[v] && (u == n || best[v] < best[u])) u = v;
        in_tree[u] = 1;
        if (step > 0) edges.push_back(best[u]);
        for (std::size_t v = 0; v < n; ++v)
            if (!in_tree[v]) best[v] = std::min(best[v], dist(u, v));
    }
    return entropy_of(edges);
}

double knee_score(std::span<const double> normalized_point) {
    double s = 0.0;
    for (double v : normalized_point) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("knee_score: component outside [0, 1]");
        s += std::abs(v - 0.5);
    }
    return s;
}

std::vector<double> source_vector(std::string_view source, std::size_t dim) {
    std::vector<double> v(dim, 0.0);
    auto bucket = [&](std::string_view tok) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : tok) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        v[h % dim] += 1.0;
    };
    std::size_t i = 0;
    while (i < source.size()) {
        unsigned char c = static_cast<unsigned char>(source[i]);
        if (std::isspace(c)) {
            ++i;
        } else if (std::isalnum(c) || c == '_') {
            std::size_t j = i;
            while (j < source.size() && (std::isalnum(static_cast<unsigned char>(source[j])) || source[j] == '_')) ++j;
            bucket(source.substr(i, j - i));
            i = j;
        } else {
            bucket(source.substr(i, 1));
            ++i;
        }
    }
    return v;
}

}  // namespace moco::metrics
