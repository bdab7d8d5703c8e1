#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

#include "moco/heuristics.hpp"

namespace moco {

namespace {

constexpr std::string_view k_bitsp_weighted_reverse = R"py(def select_neighbor(archive: List[Tuple[np.ndarray, Tuple[float, float]]], 
                    instance: np.ndarray, 
                    distance_matrix_1: np.ndarray, 
                    distance_matrix_2: np.ndarray) -> np.ndarray:
    # Compute selection probabilities based on inverse objective values
    total_objective_value = sum(1 / (obj[0] + 1e-9) + 1 / (obj[1] + 1e-9) 
                                for _, obj in archive)
    probabilities = [(1 / (obj[0] + 1e-9) + 1 / (obj[1] + 1e-9)) / total_objective_value 
                     for _, obj in archive]
    
    # Select a solution from the archive based on computed probabilities
    selected_index = np.random.choice(len(archive), p=probabilities)
    selected_solution = archive[selected_index][0].copy()
    
    # Generate neighbor using segment reversal
    n = len(selected_solution)
    i, j = sorted(random.sample(range(n), 2))  # Choose two distinct indices
    new_solution = np.concatenate((selected_solution[:i], 
                                   selected_solution[i:j+1][::-1], 
                                   selected_solution[j+1:]))
    
    return new_solution
)py";

constexpr std::string_view k_bitsp_reposition = R"py(def select_neighbor(archive: List[Tuple[np.ndarray, Tuple[float, float]]], 
                    instance: np.ndarray, 
                    distance_matrix_1: np.ndarray, 
                    distance_matrix_2: np.ndarray) -> np.ndarray:
    # Compute selection probabilities based on inverse objective values
    total_score = sum(1 / (obj[0] + 1e-9) + 1 / (obj[1] + 1e-9) 
                      for _, obj in archive)
    probabilities = [(1 / (obj[0] + 1e-9) + 1 / (obj[1] + 1e-9)) / total_score 
                     for _, obj in archive]
    
    # Select a solution from the archive based on computed probabilities
    selected_index = np.random.choice(len(archive), p=probabilities)
    selected_solution = archive[selected_index][0].copy()
    
    # Generate neighbor using node repositioning
    n = len(selected_solution)
    neighbor_solution = selected_solution.copy()
    
    # Select two distinct nodes
    idx1, idx2 = random.sample(range(n), 2)
    
    # Heuristic: move node1 right after, node2 right before
    new_position1 = (idx1 + 1) 
    new_position2 = (idx2 - 1) 
    
    # Apply the swap
    neighbor_solution[new_position1], neighbor_solution[new_position2] = neighbor_solution[idx1], neighbor_solution[idx2]
    
    return neighbor_solution
)py";

constexpr std::string_view k_tritsp_adaptive = R"py(def select_neighbor(archive: List[Tuple[np.ndarray, Tuple[float, float, float]]], 
                    instance: np.ndarray, 
                    distance_matrix_1: np.ndarray, 
                    distance_matrix_2: np.ndarray, 
                    distance_matrix_3: np.ndarray) -> np.ndarray:
    # Select a promising solution based on multi-objective performance
    archive_weights = [1 / (1 + sum(obj)) for _, obj in archive]
    weighted_archive = random.choices(archive, weights=archive_weights, k=1)[0]
    base_solution = weighted_archive[0].copy()
    
    new_solution = base_solution.copy()
    N = len(new_solution)

    # Compute performance score and set perturbation factor
    first_objective, second_objective, third_objective = weighted_archive[1]
    avg_objective = (first_objective + second_objective + third_objective) / 3
    perturbation_factor = max(0.1, 0.5 + (0.5 - avg_objective))

    # Diversify neighborhood: Swap, Reverse, or Shift
    mutation_type = random.choices(['swap', 'reverse', 'shift'], 
                                   weights=[0.5 * perturbation_factor, 
                                            0.3 * (1 - perturbation_factor), 
                                            0.2], 
                                   k=1)[0]
    
    if mutation_type == 'swap':
        idx1, idx2 = random.sample(range(1, N - 1), 2)
        new_solution[idx1], new_solution[idx2] = new_solution[idx2], new_solution[idx1]
    elif mutation_type == 'reverse':
        start_idx = random.randint(1, N - 2)
        end_idx = random.randint(start_idx + 1, N - 1)
        new_solution[start_idx:end_idx + 1] = new_solution[start_idx:end_idx + 1][::-1]
    elif mutation_type == 'shift':
        shift_idx = random.randint(1, N - 2)
        new_solution[shift_idx], new_solution[shift_idx + 1] = new_solution[shift_idx + 1], new_solution[shift_idx]

    # Adaptive large perturbation for good solutions
    if avg_objective < 0.5:
        perturb_indices = random.sample(range(1, N - 1), k=min(3, N - 2))
        random.shuffle(perturb_indices)
        for i in range(len(perturb_indices) - 1):
            new_solution[perturb_indices[i]], new_solution[perturb_indices[i + 1]] = (
                new_solution[perturb_indices[i + 1]], new_solution[perturb_indices[i]]
            )

    # Additional large shuffle with some probability
    if random.random() < 0.3:
        additional_indices = random.sample(range(1, N - 1), k=3)
        random.shuffle(additional_indices)
        new_solution[additional_indices[0]], new_solution[additional_indices[1]], new_solution[additional_indices[2]] = (
            new_solution[additional_indices[1]], new_solution[additional_indices[2]], new_solution[additional_indices[0]]
        )

    return new_solution
)py";

constexpr std::string_view k_tritsp_sum_swap = R"py(def select_neighbor(archive: List[Tuple[np.ndarray, Tuple[float, float, float]]], 
                    instance: np.ndarray, 
                    distance_matrix_1: np.ndarray, 
                    distance_matrix_2: np.ndarray, 
                    distance_matrix_3: np.ndarray) -> np.ndarray:
    # Select a solution with good objective sum
    selected_solution, _ = random.choices(
        archive, 
        weights=[1 / (obj[0] + obj[1] + obj[2]) for _, obj in archive], 
        k=1
    )[0]
    
    # Apply a simple swap
    neighbor_solution = selected_solution.copy()
    n = len(neighbor_solution)
    i, j = random.sample(range(n), 2)
    neighbor_solution[i], neighbor_solution[j] = neighbor_solution[j], neighbor_solution[i]
    
    return neighbor_solution
)py";

constexpr std::string_view k_bikp_ratio_swap = R"py(def select_neighbor(archive: List[Tuple[np.ndarray, Tuple[float, float]]], 
                    weight_lst: np.ndarray, 
                    value1_lst: np.ndarray, 
                    value2_lst: np.ndarray, 
                    capacity: float) -> np.ndarray:
    # Select a solution with high objective sum
    selected_pair = random.choices(
        archive, 
        weights=[sol[1][0] + sol[1][1] for sol in archive], 
        k=1
    )[0]
    
    base_solution = selected_pair[0].copy()
    new_solution = base_solution.copy()
    current_weight = np.dot(new_solution, weight_lst)
    
    selected_indices = np.where(new_solution == 1)[0]
    unselected_indices = np.where(new_solution == 0)[0]

    # Prioritize swapping items with high profit-to-weight ratio
    if selected_indices.size > 0 and unselected_indices.size > 0:
        profit_to_weight = (value1_lst[selected_indices] + value2_lst[selected_indices]) / weight_lst[selected_indices]
        sorted_selected_indices = selected_indices[np.argsort(profit_to_weight)[::-1]]
        
        for _ in range(5):  # Try multiple swaps for improvement
            selected_idx = random.choice(sorted_selected_indices)
            unselected_idx = random.choice(unselected_indices)

            new_solution[selected_idx] = 0
            new_solution[unselected_idx] = 1
            
            if np.dot(new_solution, weight_lst) <= capacity:
                return new_solution  # Accept valid neighbor
            
            # Revert swap if constraint violated
            new_solution[selected_idx] = 1
            new_solution[unselected_idx] = 0

    # Fallback: perturb multiple items
    num_toggles = random.randint(2, 4)
    for _ in range(num_toggles):
        idx = random.randint(0, len(base_solution) - 1)
        if new_solution[idx] == 1:
            new_solution[idx] = 0
        else:
            if current_weight + weight_lst[idx] <= capacity:
                new_solution[idx] = 1
                current_weight += weight_lst[idx]

    # Final validation: enforce capacity
    while np.dot(new_solution, weight_lst) > capacity:
        deselect_idx = random.choice(np.where(new_solution == 1)[0])
        new_solution[deselect_idx] = 0

    return new_solution
)py";

constexpr std::string_view k_bikp_flip = R"py(def select_neighbor(archive: List[Tuple[np.ndarray, Tuple[float, float]]], 
                    weight_lst: np.ndarray, 
                    value1_lst: np.ndarray, 
                    value2_lst: np.ndarray, 
                    capacity: float) -> np.ndarray:
    # Randomly sample a base solution
    selected_solution, _ = random.choice(archive)
    neighbor_solution = selected_solution.copy()
    num_items = len(weight_lst)
    
    # Flip 1 to 3 random items with feasibility check
    for _ in range(random.randint(1, 3)):
        item_index = random.randint(0, num_items - 1)
        neighbor_solution[item_index] = 1 - neighbor_solution[item_index]
        
        # Undo flip if capacity exceeded
        while np.dot(neighbor_solution, weight_lst) > capacity:
            neighbor_solution[item_index] = 1 - neighbor_solution[item_index]
            item_index = random.randint(0, num_items - 1)
            neighbor_solution[item_index] = 1 - neighbor_solution[item_index]

    return neighbor_solution
)py";

constexpr std::string_view k_bicvrp_makespan_swap = R"py(def select_neighbor(archive: List[Tuple[np.ndarray, Tuple[float, float]]], 
                    coords: np.ndarray, 
                    demand: np.ndarray, 
                    distance_matrix: np.ndarray, 
                    capacity: float) -> np.ndarray:
    # Select a solution with best makespan (2nd objective)
    best_solution, _ = min(archive, key=lambda x: x[1][1])
    neighbor_solution = [np.copy(route) for route in best_solution]
    
    # Choose two distinct routes
    route_from_index = np.random.choice(len(neighbor_solution))
    route_to_index = np.random.choice([i for i in range(len(neighbor_solution)) if i != route_from_index])

    if len(neighbor_solution[route_from_index]) > 2 and len(neighbor_solution[route_to_index]) > 2:
        # Select customers (excluding depot)
        customer_from_index = np.random.randint(1, len(neighbor_solution[route_from_index]) - 1)
        customer_to_index = np.random.randint(1, len(neighbor_solution[route_to_index]) - 1)
        
        customer_from = neighbor_solution[route_from_index][customer_from_index]
        customer_to = neighbor_solution[route_to_index][customer_to_index]

        # Swap the customers
        neighbor_solution[route_from_index][customer_from_index] = customer_to
        neighbor_solution[route_to_index][customer_to_index] = customer_from

        # Validate route demands
        demand_from = np.sum(demand[neighbor_solution[route_from_index]])
        demand_to = np.sum(demand[neighbor_solution[route_to_index]])

        if demand_from > capacity or demand_to > capacity:
            # Revert if infeasible
            neighbor_solution[route_from_index][customer_from_index] = customer_from
            neighbor_solution[route_to_index][customer_to_index] = customer_to

    return neighbor_solution
)py";

constexpr std::string_view k_bicvrp_min_makespan_relocate = R"py(def select_neighbor(archive: List[Tuple[np.ndarray, Tuple[float, float]]], 
                    coords: np.ndarray, 
                    demand: np.ndarray, 
                    distance_matrix: np.ndarray, 
                    capacity: float) -> np.ndarray:
    # Select route with smallest makespan
    min_makespan_solution = min(archive, key=lambda x: x[1][1])
    routes = min_makespan_solution[0]

    # Choose two distinct routes
    route1_index, route2_index = np.random.choice(len(routes), 2, replace=False)
    route1 = routes[route1_index]
    route2 = routes[route2_index]

    if len(route1) > 2 and len(route2) > 2:
        # Choose customers (excluding depot)
        customer1_index = np.random.randint(1, len(route1) - 1)
        customer2_index = np.random.randint(1, len(route2) - 1)

        customer1 = route1[customer1_index]
        customer2 = route2[customer2_index]

        # Attempt to swap
        new_route1 = route1.copy()
        new_route2 = route2.copy()
        new_route1[customer1_index], new_route2[customer2_index] = customer2, customer1

        # Check if feasible
        demand1 = np.sum(demand[new_route1[1:-1]])
        demand2 = np.sum(demand[new_route2[1:-1]])

        if demand1 <= capacity and demand2 <= capacity:
            routes[route1_index] = new_route1
            routes[route2_index] = new_route2
        else:
            # Fallback: remove and insert
            idx_remove = np.random.randint(1, len(route1) - 1)
            customer = route1[idx_remove]
            new_route1 = np.delete(route1, idx_remove)

            if np.sum(demand[new_route1[1:-1]]) + demand[customer] <= capacity:
                routes[route1_index] = new_route1
                routes[route2_index] = np.insert(route2, -1, customer)

    return routes
)py";

const Solution& pick_weighted(const Archive& archive, std::span<const double> weights, Rng& rng) {
    return archive[rng.weighted(weights)].solution;
}

std::vector<double> weights_of(const Archive& archive, double (*score)(const ObjectiveVector&)) {
    std::vector<double> w;
    w.reserve(archive.size());
    for (const auto& e : archive) w.push_back(score(e.objectives));
    return w;
}

// Bi-TSP

Solution bitsp_weighted_reverse(const Archive& archive, const ProblemContext&, Rng& rng) {
    auto p = inverse_objective_probabilities(archive);
    Tour t = std::get<Tour>(pick_weighted(archive, p, rng));
    const std::size_t n = t.order.size();
    if (n < 2) return t;
    auto idx = rng.sample(n, 2);
    auto [i, j] = std::minmax(idx[0], idx[1]);
    std::reverse(t.order.begin() + static_cast<std::ptrdiff_t>(i), t.order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    return t;
}

// The generated code writes both picks into neighboring slots, which duplicates
// nodes; here each pick is swapped with its neighbor instead.
Solution bitsp_reposition(const Archive& archive, const ProblemContext&, Rng& rng) {
    auto p = inverse_objective_probabilities(archive);
    Tour t = std::get<Tour>(pick_weighted(archive, p, rng));
    const std::size_t n = t.order.size();
    if (n < 2) return t;
    auto idx = rng.sample(n, 2);
    std::swap(t.order[idx[0]], t.order[(idx[0] + 1) % n]);
    std::swap(t.order[idx[1]], t.order[(idx[1] + n - 1) % n]);
    return t;
}

// Tri-TSP

Solution tritsp_adaptive(const Archive& archive, const ProblemContext&, Rng& rng) {
    auto w = weights_of(archive, [](const ObjectiveVector& f) { return 1.0 / (1.0 + f[0] + f[1] + f[2]); });
    const std::size_t pick = rng.weighted(w);
    Tour t = std::get<Tour>(archive[pick].solution);
    const auto& f = archive[pick].objectives;
    std::vector<int>& s = t.order;
    const std::size_t n = s.size();
    if (n < 5) {
        if (n >= 2) {
            auto idx = rng.sample(n, 2);
            std::swap(s[idx[0]], s[idx[1]]);
        }
        return t;
    }
    const double avg = (f[0] + f[1] + f[2]) / 3.0;
    const double factor = std::max(0.1, 0.5 + (0.5 - avg));
    const double op_weights[] = {0.5 * factor, 0.3 * (1.0 - factor), 0.2};
    const int last = static_cast<int>(n) - 1;
    switch (rng.weighted(op_weights)) {
        case 0: {
            auto idx = rng.sample(n - 2, 2);
            std::swap(s[idx[0] + 1], s[idx[1] + 1]);
            break;
        }
        case 1: {
            int a = rng.range(1, last - 1);
            int b = rng.range(a + 1, last);
            std::reverse(s.begin() + a, s.begin() + b + 1);
            break;
        }
        default: {
            int a = rng.range(1, last - 1);
            std::swap(s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(a) + 1]);
            break;
        }
    }
    if (avg < 0.5) {
        auto idx = rng.sample(n - 2, std::min<std::size_t>(3, n - 2));
        rng.shuffle(idx.begin(), idx.end());
        for (std::size_t i = 0; i + 1 < idx.size(); ++i) std::swap(s[idx[i] + 1], s[idx[i + 1] + 1]);
    }
    if (rng.uniform() < 0.3) {
        auto idx = rng.sample(n - 2, 3);
        rng.shuffle(idx.begin(), idx.end());
        int a = s[idx[0] + 1], b = s[idx[1] + 1], c = s[idx[2] + 1];
        s[idx[0] + 1] = b;
        s[idx[1] + 1] = c;
        s[idx[2] + 1] = a;
    }
    return t;
}

Solution tritsp_sum_swap(const Archive& archive, const ProblemContext&, Rng& rng) {
    auto w = weights_of(archive, [](const ObjectiveVector& f) { return 1.0 / (f[0] + f[1] + f[2]); });
    Tour t = std::get<Tour>(pick_weighted(archive, w, rng));
    if (t.order.size() >= 2) {
        auto idx = rng.sample(t.order.size(), 2);
        std::swap(t.order[idx[0]], t.order[idx[1]]);
    }
    return t;
}

// Bi-KP

double selected_weight(const Selection& s, const KpInstance& inst) {
    double w = 0.0;
    for (std::size_t i = 0; i < s.bits.size(); ++i)
        if (s.bits[i]) w += inst.weights[i];
    return w;
}

std::vector<std::size_t> indices_with(const Selection& s, std::uint8_t value) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < s.bits.size(); ++i)
        if (s.bits[i] == value) out.push_back(i);
    return out;
}

Solution bikp_ratio_swap(const Archive& archive, const ProblemContext& ctx, Rng& rng) {
    const KpInstance& inst = ctx.kp();
    // canonical objectives are negated profits
    auto w = weights_of(archive, [](const ObjectiveVector& f) { return -f[0] - f[1]; });
    const bool any_positive = std::any_of(w.begin(), w.end(), [](double v) { return v > 0.0; });
    const std::size_t pick = any_positive ? rng.weighted(w) : rng.below(archive.size());
    Selection s = std::get<Selection>(archive[pick].solution);
    double current = selected_weight(s, inst);

    auto selected = indices_with(s, 1);
    auto unselected = indices_with(s, 0);
    if (!selected.empty() && !unselected.empty()) {
        for (int attempt = 0; attempt < 5; ++attempt) {
            std::size_t in = selected[rng.below(selected.size())];
            std::size_t out = unselected[rng.below(unselected.size())];
            s.bits[in] = 0;
            s.bits[out] = 1;
            if (selected_weight(s, inst) <= inst.capacity) return s;
            s.bits[in] = 1;
            s.bits[out] = 0;
        }
    }

    const int toggles = rng.range(2, 4);
    for (int k = 0; k < toggles; ++k) {
        std::size_t i = rng.below(s.bits.size());
        if (s.bits[i]) {
            s.bits[i] = 0;
        } else if (current + inst.weights[i] <= inst.capacity) {
            s.bits[i] = 1;
            current += inst.weights[i];
        }
    }
    while (selected_weight(s, inst) > inst.capacity) {
        auto on = indices_with(s, 1);
        s.bits[on[rng.below(on.size())]] = 0;
    }
    return s;
}

Solution bikp_flip(const Archive& archive, const ProblemContext& ctx, Rng& rng) {
    const KpInstance& inst = ctx.kp();
    Selection s = std::get<Selection>(archive[rng.below(archive.size())].solution);
    const std::size_t n = s.bits.size();
    if (n == 0) return s;
    const int flips = rng.range(1, 3);
    for (int k = 0; k < flips; ++k) {
        std::size_t i = rng.below(n);
        s.bits[i] ^= 1;
        while (selected_weight(s, inst) > inst.capacity) {
            s.bits[i] ^= 1;
            i = rng.below(n);
            s.bits[i] ^= 1;
        }
    }
    return s;
}

// Bi-CVRP

int route_load(const std::vector<int>& route, const CvrpInstance& inst) {
    int load = 0;
    for (int c : route) load += inst.raw_demand[static_cast<std::size_t>(c)];
    return load;
}

const Routes& min_makespan(const Archive& archive) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < archive.size(); ++i)
        if (archive[i].objectives[1] < archive[best].objectives[1]) best = i;
    return std::get<Routes>(archive[best].solution);
}

Solution bicvrp_makespan_swap(const Archive& archive, const ProblemContext& ctx, Rng& rng) {
    const CvrpInstance& inst = ctx.cvrp();
    Routes out = min_makespan(archive);
    const std::size_t k = out.routes.size();
    if (k < 2) return out;
    const std::size_t from = rng.below(k);
    std::size_t to = rng.below(k - 1);
    if (to >= from) ++to;
    auto& a = out.routes[from];
    auto& b = out.routes[to];
    if (a.size() > 2 && b.size() > 2) {
        std::size_t ia = 1 + rng.below(a.size() - 2);
        std::size_t ib = 1 + rng.below(b.size() - 2);
        std::swap(a[ia], b[ib]);
        if (route_load(a, inst) > inst.capacity || route_load(b, inst) > inst.capacity) std::swap(a[ia], b[ib]);
    }
    return out;
}

// The generated fallback checks the shortened source route against capacity;
// here the receiving route is checked, and a route left empty is dropped.
Solution bicvrp_min_makespan_relocate(const Archive& archive, const ProblemContext& ctx, Rng& rng) {
    const CvrpInstance& inst = ctx.cvrp();
    Routes out = min_makespan(archive);
    const std::size_t k = out.routes.size();
    if (k < 2) return out;
    auto idx = rng.sample(k, 2);
    auto& r1 = out.routes[idx[0]];
    auto& r2 = out.routes[idx[1]];
    if (r1.size() > 2 && r2.size() > 2) {
        std::size_t i1 = 1 + rng.below(r1.size() - 2);
        std::size_t i2 = 1 + rng.below(r2.size() - 2);
        std::swap(r1[i1], r2[i2]);
        if (route_load(r1, inst) <= inst.capacity && route_load(r2, inst) <= inst.capacity) return out;
        std::swap(r1[i1], r2[i2]);

        std::size_t remove = 1 + rng.below(r1.size() - 2);
        int customer = r1[remove];
        if (route_load(r2, inst) + inst.raw_demand[static_cast<std::size_t>(customer)] <= inst.capacity) {
            r1.erase(r1.begin() + static_cast<std::ptrdiff_t>(remove));
            r2.insert(r2.end() - 1, customer);
            if (r1.size() == 2) out.routes.erase(out.routes.begin() + static_cast<std::ptrdiff_t>(idx[0]));
        }
    }
    return out;
}

// Whitespace-free text with import lines removed.
std::string squeeze(std::string_view text) {
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        auto first = line.find_first_not_of(" \t");
        bool import = first != std::string_view::npos &&
                      (line.substr(first).starts_with("import ") || line.substr(first).starts_with("from "));
        if (!import)
            for (char c : line)
                if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
        pos = end + 1;
    }
    return out;
}

}  // namespace

std::vector<double> inverse_objective_probabilities(const Archive& archive) {
    std::vector<double> p;
    p.reserve(archive.size());
    for (const auto& e : archive) p.push_back(1.0 / (e.objectives[0] + 1e-9) + 1.0 / (e.objectives[1] + 1e-9));
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= total;
    return p;
}

const std::vector<BuiltinInfo>& builtin_catalog() {
    static const std::vector<BuiltinInfo> catalog = {
        {"bitsp_weighted_reverse", Problem::bi_tsp,
         "Pick a tour with probability proportional to the summed inverse objectives, then reverse a random segment.",
         bitsp_weighted_reverse, k_bitsp_weighted_reverse},
        {"bitsp_reposition", Problem::bi_tsp,
         "Pick a tour by inverse-objective weights, then move one node forward and another backward by one slot.",
         bitsp_reposition, k_bitsp_reposition},
        {"tritsp_adaptive", Problem::tri_tsp,
         "Pick a tour by inverse objective sum, apply swap, reverse or shift chosen by a perturbation factor, and "
         "add extra swaps for good tours or at random.",
         tritsp_adaptive, k_tritsp_adaptive},
        {"tritsp_sum_swap", Problem::tri_tsp, "Pick a tour by inverse objective sum and swap two random nodes.",
         tritsp_sum_swap, k_tritsp_sum_swap},
        {"bikp_ratio_swap", Problem::bi_kp,
         "Pick a selection by total profit, try up to five in/out swaps within capacity, else toggle a few items "
         "and drop random items until feasible.",
         bikp_ratio_swap, k_bikp_ratio_swap},
        {"bikp_flip", Problem::bi_kp, "Pick a random selection and flip one to three items, re-rolling overweight flips.",
         bikp_flip, k_bikp_flip},
        {"bicvrp_makespan_swap", Problem::bi_cvrp,
         "Take the solution with the smallest makespan and swap two customers between two routes, reverting on "
         "capacity violation.",
         bicvrp_makespan_swap, k_bicvrp_makespan_swap},
        {"bicvrp_min_makespan_relocate", Problem::bi_cvrp,
         "Take the smallest-makespan solution, swap customers between two routes, or relocate one customer when the "
         "swap breaks capacity.",
         bicvrp_min_makespan_relocate, k_bicvrp_min_makespan_relocate},
    };
    return catalog;
}

const BuiltinInfo* find_builtin(std::string_view id) {
    for (const auto& b : builtin_catalog())
        if (b.id == id) return &b;
    return nullptr;
}

const BuiltinInfo* match_builtin_source(std::string_view source) {
    const std::string key = squeeze(source);
    for (const auto& b : builtin_catalog())
        if (squeeze(b.source) == key) return &b;
    return nullptr;
}

}  // namespace moco
