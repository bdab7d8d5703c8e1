#include "moco/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace moco {

namespace {

template <class T>
T field(const Json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("bad field '") + key + "': " + e.what());
    }
}

}  // namespace

Json instance_to_json(const Instance& instance) {
    Json doc;
    doc["problem"] = std::string(problem_tag(problem_of(instance)));
    std::visit(
        [&](const auto& inst) {
            doc["seed"] = inst.seed;
            doc["n"] = inst.n;
        },
        instance);
    Json payload;
    if (auto* tsp = std::get_if<TspInstance>(&instance)) {
        payload["m"] = tsp->m;
        Json rows = Json::array();
        for (std::size_t i = 0; i < tsp->n; ++i) {
            auto first = tsp->coords.begin() + static_cast<std::ptrdiff_t>(i * 2 * tsp->m);
            rows.push_back(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(2 * tsp->m)));
        }
        payload["coords"] = std::move(rows);
    } else if (auto* cvrp = std::get_if<CvrpInstance>(&instance)) {
        Json rows = Json::array();
        for (std::size_t i = 0; i <= cvrp->n; ++i) rows.push_back({cvrp->coords[2 * i], cvrp->coords[2 * i + 1]});
        payload["coords"] = std::move(rows);
        payload["demand"] = cvrp->raw_demand;
        payload["normalized_demand"] = cvrp->demand;
        payload["capacity"] = cvrp->capacity;
    } else {
        const auto& kp = std::get<KpInstance>(instance);
        payload["weights"] = kp.weights;
        payload["profits"] = {kp.profits[0], kp.profits[1]};
        payload["capacity"] = kp.capacity;
    }
    doc["payload"] = std::move(payload);
    return doc;
}

Instance instance_from_json(const Json& doc) {
    const Problem problem = parse_problem(field<std::string>(doc, "problem"));
    const auto seed = field<std::uint64_t>(doc, "seed");
    const auto n = field<std::size_t>(doc, "n");
    const Json& payload = doc.at("payload");
    switch (problem) {
        case Problem::bi_tsp:
        case Problem::tri_tsp: {
            TspInstance inst;
            inst.seed = seed;
            inst.n = n;
            inst.m = field<std::size_t>(payload, "m");
            if (inst.m != objective_count(problem)) throw std::invalid_argument("instance: m does not match problem");
            auto rows = field<std::vector<std::vector<double>>>(payload, "coords");
            if (rows.size() != n) throw std::invalid_argument("instance: coords row count differs from n");
            for (const auto& r : rows) {
                if (r.size() != 2 * inst.m) throw std::invalid_argument("instance: coords row width");
                inst.coords.insert(inst.coords.end(), r.begin(), r.end());
            }
            return inst;
        }
        case Problem::bi_cvrp: {
            CvrpInstance inst;
            inst.seed = seed;
            inst.n = n;
            auto rows = field<std::vector<std::vector<double>>>(payload, "coords");
            if (rows.size() != n + 1) throw std::invalid_argument("instance: coords must have n + 1 rows");
            for (const auto& r : rows) {
                if (r.size() != 2) throw std::invalid_argument("instance: coords row width");
                inst.coords.insert(inst.coords.end(), r.begin(), r.end());
            }
            inst.raw_demand = field<std::vector<int>>(payload, "demand");
            inst.capacity = field<int>(payload, "capacity");
            if (inst.raw_demand.size() != n + 1 || inst.capacity <= 0)
                throw std::invalid_argument("instance: bad demand or capacity");
            for (int d : inst.raw_demand) inst.demand.push_back(static_cast<double>(d) / inst.capacity);
            return inst;
        }
        case Problem::bi_kp: {
            KpInstance inst;
            inst.seed = seed;
            inst.n = n;
            inst.weights = field<std::vector<double>>(payload, "weights");
            auto profits = field<std::vector<std::vector<double>>>(payload, "profits");
            inst.capacity = field<double>(payload, "capacity");
            if (profits.size() != 2 || inst.weights.size() != n || profits[0].size() != n || profits[1].size() != n)
                throw std::invalid_argument("instance: knapsack arrays must have n entries");
            inst.profits = {profits[0], profits[1]};
            return inst;
        }
    }
    throw std::invalid_argument("instance: unknown problem");
}

Json solution_to_json(const Solution& solution) {
    if (auto* t = std::get_if<Tour>(&solution)) return t->order;
    if (auto* r = std::get_if<Routes>(&solution)) return r->routes;
    return std::get<Selection>(solution).bits;
}

Solution solution_from_json(const Json& doc, Problem problem) {
    try {
        switch (problem) {
            case Problem::bi_tsp:
            case Problem::tri_tsp: return Tour{doc.get<std::vector<int>>()};
            case Problem::bi_cvrp: return Routes{doc.get<std::vector<std::vector<int>>>()};
            case Problem::bi_kp: {
                Selection s;
                for (const auto& b : doc) {
                    int v = b.get<int>();
                    if (v != 0 && v != 1) throw std::invalid_argument("selection: non-binary flag");
                    s.bits.push_back(static_cast<std::uint8_t>(v));
                }
                return s;
            }
        }
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("solution: ") + e.what());
    }
    throw std::invalid_argument("solution: unknown problem");
}

Json archive_to_json(const Archive& archive) {
    Json out = Json::array();
    for (const auto& e : archive) out.push_back({{"objectives", e.objectives}, {"solution", solution_to_json(e.solution)}});
    return out;
}

Json semo_result_to_json(const SemoResult& result) {
    return {{"iterations", result.iterations},
            {"elapsed_s", result.elapsed_s},
            {"accepted", result.accepted},
            {"rejected_infeasible", result.rejected_infeasible},
            {"archive", archive_to_json(result.archive)}};
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json_file(const std::filesystem::path& path, const Json& doc) { write_text_file(path, doc.dump(2) + "\n"); }

Json read_json_file(const std::filesystem::path& path) {
    try {
        return Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

}  // namespace moco
