#include "moco/problems.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace moco {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double euclid(double x1, double y1, double x2, double y2) {
    return std::hypot(x1 - x2, y1 - y2);
}

std::string describe(const char* what, long value) {
    std::ostringstream os;
    os << what << ' ' << value;
    return os.str();
}

std::optional<std::string> check_tour(const Tour& tour, std::size_t n) {
    if (tour.order.size() != n) {
        std::ostringstream os;
        os << "tour has " << tour.order.size() << " nodes, expected " << n;
        return os.str();
    }
    std::vector<char> seen(n, 0);
    for (int v : tour.order) {
        if (v < 0 || static_cast<std::size_t>(v) >= n) return describe("node out of range", v);
        if (seen[v]) return describe("duplicate node", v);
        seen[v] = 1;
    }
    return std::nullopt;
}

std::optional<std::string> check_routes(const Routes& sol, const CvrpInstance& inst) {
    if (sol.routes.empty()) return "no routes";
    std::vector<char> seen(inst.n + 1, 0);
    for (std::size_t r = 0; r < sol.routes.size(); ++r) {
        const auto& route = sol.routes[r];
        if (route.size() < 2 || route.front() != 0 || route.back() != 0)
            return describe("route does not start and end at the depot:", static_cast<long>(r));
        if (route.size() == 2) return describe("empty route", static_cast<long>(r));
        long load = 0;
        for (std::size_t k = 1; k + 1 < route.size(); ++k) {
            int c = route[k];
            if (c == 0) return describe("depot inside route", static_cast<long>(r));
            if (c < 0 || static_cast<std::size_t>(c) > inst.n) return describe("customer out of range", c);
            if (seen[c]) return describe("duplicate customer", c);
            seen[c] = 1;
            load += inst.raw_demand[c];
        }
        if (load > inst.capacity) return describe("capacity exceeded on route", static_cast<long>(r));
    }
    for (std::size_t c = 1; c <= inst.n; ++c)
        if (!seen[c]) return describe("missing customer", static_cast<long>(c));
    return std::nullopt;
}

std::optional<std::string> check_selection(const Selection& sel, const KpInstance& inst) {
    if (sel.bits.size() != inst.n) {
        std::ostringstream os;
        os << "selection has " << sel.bits.size() << " bits, expected " << inst.n;
        return os.str();
    }
    double weight = 0.0;
    for (std::size_t i = 0; i < inst.n; ++i) {
        if (sel.bits[i] > 1) return describe("non-binary flag at item", static_cast<long>(i));
        if (sel.bits[i]) weight += inst.weights[i];
    }
    if (weight > inst.capacity) {
        std::ostringstream os;
        os << "overweight: " << weight << " > " << inst.capacity;
        return os.str();
    }
    return std::nullopt;
}

template <class Dist>
ObjectiveVector cvrp_objectives(const Routes& sol, Dist&& dist) {
    double total = 0.0;
    double makespan = 0.0;
    for (const auto& route : sol.routes) {
        double len = 0.0;
        for (std::size_t k = 0; k + 1 < route.size(); ++k) len += dist(route[k], route[k + 1]);
        total += len;
        makespan = std::max(makespan, len);
    }
    return {total, makespan};
}

template <class Dist>
double tour_length(const Tour& tour, Dist&& dist) {
    const auto& o = tour.order;
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < o.size(); ++i) len += dist(o[i], o[i + 1]);
    if (!o.empty()) len += dist(o.back(), o.front());
    return len;
}

[[noreturn]] void wrong_encoding(const char* expected) {
    throw std::invalid_argument(std::string("solution encoding does not match instance: expected ") + expected);
}

}  // namespace

std::string_view problem_tag(Problem p) {
    switch (p) {
        case Problem::bi_tsp: return "bitsp";
        case Problem::tri_tsp: return "tritsp";
        case Problem::bi_cvrp: return "bicvrp";
        case Problem::bi_kp: return "bikp";
    }
    return "?";
}

Problem parse_problem(std::string_view tag) {
    if (tag == "bitsp") return Problem::bi_tsp;
    if (tag == "tritsp") return Problem::tri_tsp;
    if (tag == "bicvrp") return Problem::bi_cvrp;
    if (tag == "bikp") return Problem::bi_kp;
    throw std::invalid_argument("unknown problem tag '" + std::string(tag) + "' (expected bitsp|tritsp|bicvrp|bikp)");
}

std::size_t objective_count(Problem p) {
    return p == Problem::tri_tsp ? 3 : 2;
}

Problem problem_of(const Instance& instance) {
    return std::visit(overloaded{
                          [](const TspInstance& t) { return t.m == 3 ? Problem::tri_tsp : Problem::bi_tsp; },
                          [](const CvrpInstance&) { return Problem::bi_cvrp; },
                          [](const KpInstance&) { return Problem::bi_kp; },
                      },
                      instance);
}

std::size_t size_of(const Instance& instance) {
    return std::visit([](const auto& i) { return i.n; }, instance);
}

TspInstance generate_motsp(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("MOTSP requires n >= 3");
    if (m != 2 && m != 3) throw std::invalid_argument("MOTSP requires M in {2, 3}");
    Rng rng(derive_seed(seed, {0x7150, m}));
    TspInstance inst;
    inst.seed = seed;
    inst.n = n;
    inst.m = m;
    inst.coords.resize(n * 2 * m);
    for (auto& c : inst.coords) c = rng.uniform();
    return inst;
}

int cvrp_capacity_for(std::size_t n) {
    if (n < 20 || n > 100) throw std::invalid_argument("Bi-CVRP size rule: 20 <= n <= 100");
    if (n < 40) return 30;
    if (n < 70) return 40;
    return 50;
}

double kp_capacity_for(std::size_t n) {
    if (n < 50 || n > 200) throw std::invalid_argument("Bi-KP size rule: 50 <= n <= 200");
    return n < 100 ? 12.5 : 25.0;
}

CvrpInstance generate_mocvrp(std::size_t n, std::uint64_t seed) {
    const int capacity = cvrp_capacity_for(n);
    Rng rng(derive_seed(seed, {0xc0a9}));
    CvrpInstance inst;
    inst.seed = seed;
    inst.n = n;
    inst.capacity = capacity;
    inst.coords.resize((n + 1) * 2);
    for (auto& c : inst.coords) c = rng.uniform();
    inst.raw_demand.assign(n + 1, 0);
    inst.demand.assign(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        inst.raw_demand[i] = rng.range(1, 9);
        inst.demand[i] = static_cast<double>(inst.raw_demand[i]) / capacity;
    }
    return inst;
}

KpInstance generate_mokp(std::size_t n, std::uint64_t seed) {
    const double capacity = kp_capacity_for(n);
    Rng rng(derive_seed(seed, {0x4b9}));
    KpInstance inst;
    inst.seed = seed;
    inst.n = n;
    inst.capacity = capacity;
    inst.weights.resize(n);
    inst.profits[0].resize(n);
    inst.profits[1].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        inst.weights[i] = rng.uniform();
        inst.profits[0][i] = rng.uniform();
        inst.profits[1][i] = rng.uniform();
    }
    return inst;
}

Instance generate_instance(Problem problem, std::size_t n, std::uint64_t seed) {
    switch (problem) {
        case Problem::bi_tsp: return generate_motsp(n, 2, seed);
        case Problem::tri_tsp: return generate_motsp(n, 3, seed);
        case Problem::bi_cvrp: return generate_mocvrp(n, seed);
        case Problem::bi_kp: return generate_mokp(n, seed);
    }
    throw std::invalid_argument("unknown problem");
}

DistanceMatrix distance_matrix(const TspInstance& inst, std::size_t objective) {
    if (objective >= inst.m) throw std::invalid_argument("objective index out of range");
    std::vector<double> d(inst.n * inst.n, 0.0);
    for (std::size_t i = 0; i < inst.n; ++i)
        for (std::size_t j = i + 1; j < inst.n; ++j) {
            double v = euclid(inst.x(i, objective), inst.y(i, objective), inst.x(j, objective), inst.y(j, objective));
            d[i * inst.n + j] = v;
            d[j * inst.n + i] = v;
        }
    return DistanceMatrix(inst.n, std::move(d));
}

DistanceMatrix distance_matrix(const CvrpInstance& inst) {
    const std::size_t n = inst.n + 1;
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = euclid(inst.coords[2 * i], inst.coords[2 * i + 1], inst.coords[2 * j], inst.coords[2 * j + 1]);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    return DistanceMatrix(n, std::move(d));
}

ObjectiveVector eval_motsp(const Tour& tour, const TspInstance& inst) {
    if (auto v = check_tour(tour, inst.n)) throw FeasibilityError(*v);
    ObjectiveVector f(inst.m);
    for (std::size_t m = 0; m < inst.m; ++m)
        f[m] = tour_length(tour, [&](int a, int b) { return euclid(inst.x(a, m), inst.y(a, m), inst.x(b, m), inst.y(b, m)); });
    return f;
}

ObjectiveVector eval_mocvrp(const Routes& routes, const CvrpInstance& inst) {
    if (auto v = check_routes(routes, inst)) throw FeasibilityError(*v);
    return cvrp_objectives(routes, [&](int a, int b) {
        return euclid(inst.coords[2 * a], inst.coords[2 * a + 1], inst.coords[2 * b], inst.coords[2 * b + 1]);
    });
}

std::array<double, 2> kp_raw_profits(const Selection& sel, const KpInstance& inst) {
    if (auto v = check_selection(sel, inst)) throw FeasibilityError(*v);
    std::array<double, 2> p{0.0, 0.0};
    for (std::size_t i = 0; i < inst.n; ++i)
        if (sel.bits[i]) {
            p[0] += inst.profits[0][i];
            p[1] += inst.profits[1][i];
        }
    return p;
}

ObjectiveVector eval_mokp(const Selection& sel, const KpInstance& inst) {
    auto p = kp_raw_profits(sel, inst);
    return {-p[0], -p[1]};
}

std::optional<std::string> validate_solution(const Solution& solution, const Instance& instance) {
    return std::visit(overloaded{
                          [](const Tour& t, const TspInstance& i) { return check_tour(t, i.n); },
                          [](const Routes& r, const CvrpInstance& i) { return check_routes(r, i); },
                          [](const Selection& s, const KpInstance& i) { return check_selection(s, i); },
                          [](const auto&, const TspInstance&) -> std::optional<std::string> { wrong_encoding("tour"); },
                          [](const auto&, const CvrpInstance&) -> std::optional<std::string> { wrong_encoding("routes"); },
                          [](const auto&, const KpInstance&) -> std::optional<std::string> { wrong_encoding("selection"); },
                      },
                      solution, instance);
}

Solution random_solution(const Instance& instance, Rng& rng) {
    return std::visit(overloaded{
                          [&](const TspInstance& inst) -> Solution {
                              Tour t;
                              t.order.resize(inst.n);
                              std::iota(t.order.begin(), t.order.end(), 0);
                              rng.shuffle(t.order.begin(), t.order.end());
                              return t;
                          },
                          [&](const CvrpInstance& inst) -> Solution {
                              std::vector<int> customers(inst.n);
                              std::iota(customers.begin(), customers.end(), 1);
                              rng.shuffle(customers.begin(), customers.end());
                              Routes r;
                              std::vector<int> route{0};
                              int load = 0;
                              for (int c : customers) {
                                  if (load + inst.raw_demand[c] > inst.capacity) {
                                      route.push_back(0);
                                      r.routes.push_back(std::move(route));
                                      route = {0};
                                      load = 0;
                                  }
                                  route.push_back(c);
                                  load += inst.raw_demand[c];
                              }
                              route.push_back(0);
                              r.routes.push_back(std::move(route));
                              return r;
                          },
                          [&](const KpInstance& inst) -> Solution {
                              Selection s;
                              s.bits.assign(inst.n, 0);
                              std::vector<std::size_t> order(inst.n);
                              std::iota(order.begin(), order.end(), std::size_t{0});
                              rng.shuffle(order.begin(), order.end());
                              double weight = 0.0;
                              for (std::size_t i : order) {
                                  if (weight + inst.weights[i] <= inst.capacity) {
                                      s.bits[i] = 1;
                                      weight += inst.weights[i];
                                  }
                              }
                              return s;
                          },
                      },
                      instance);
}

ProblemContext::ProblemContext(Instance instance) : instance_(std::move(instance)), problem_(problem_of(instance_)) {
    std::visit(overloaded{
                   [&](const TspInstance& t) {
                       for (std::size_t m = 0; m < t.m; ++m) matrices_.push_back(distance_matrix(t, m));
                   },
                   [&](const CvrpInstance& c) { matrices_.push_back(distance_matrix(c)); },
                   [](const KpInstance&) {},
               },
               instance_);
}

std::optional<std::string> ProblemContext::validate(const Solution& solution) const {
    return validate_solution(solution, instance_);
}

ObjectiveVector ProblemContext::evaluate(const Solution& solution) const {
    if (auto v = validate(solution)) throw FeasibilityError(*v);
    return std::visit(overloaded{
                          [&](const Tour& t) {
                              ObjectiveVector f(matrices_.size());
                              for (std::size_t m = 0; m < matrices_.size(); ++m)
                                  f[m] = tour_length(t, [&](int a, int b) { return matrices_[m](a, b); });
                              return f;
                          },
                          [&](const Routes& r) { return cvrp_objectives(r, [&](int a, int b) { return matrices_[0](a, b); }); },
                          [&](const Selection& s) { return eval_mokp(s, kp()); },
                      },
                      solution);
}

}  // namespace moco
