#include "moco/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace moco::llm {

namespace {

constexpr std::string_view k_system =
    "You are an expert in the domain of optimization heuristics helping to design heuristics that can effectively "
    "solve optimization problems.";

constexpr std::string_view k_task_bitsp =
    R"(You are solving a Bi-objective Travelling Salesman Problem (bi-TSP), where each node has two different 2D coordinates: 
(x1, y1) and (x2, y2), representing its position in two objective spaces. The goal is to find a tour visiting each node exactly once and returning 
to the starting node, while minimizing two objectives simultaneously: the total tour length in each coordinate space.

Given an archive of solutions, where each solution is a numpy array representing a TSP tour, and its corresponding objective 
is a tuple of two values (cost in each space), design a heuristic function named select_neighbor that selects one solution from the archive 
and applies a novel or hybrid local search operator to generate a neighbor solution from it.

Please perform an intelligent random selection from among the solutions that show promising potential for further local improvement. 
Using a creative local search strategy that you design yourself, go beyond standard approaches to design a method that yields higher-quality 
solutions across multiple objectives. The function should return the new neighbor solution.)";

constexpr std::string_view k_task_tritsp =
    R"(You are solving a Tri-objective Travelling Salesman Problem (tri-TSP), where each node has three different 2D coordinates: 
(x1, y1), (x2, y2), and (x3, y3), representing its position in three objective spaces. 
The goal is to find a tour visiting each node exactly once and returning to the starting node, while minimizing three objectives simultaneously: 
the total tour length in each coordinate space.

Given an archive of non-dominated solutions, where each solution is a numpy array representing a TSP tour, 
and its corresponding objective is a tuple of three values (cost in each space), design a heuristic function named select_neighbor 
that selects one solution from the archive and applies a novel or hybrid local search operator to generate a neighbor solution from it.
Please perform an intelligent random selection from among the solutions that show promising potential for further local improvement. 
Using a creative local search strategy of your own design, specifically tailored to effectively optimize across three objectives, 
go beyond standard approaches to design a method that yields higher-quality solutions across multiple objectives. 
The function should return the new neighbor solution.)";

constexpr std::string_view k_task_bikp =
    R"(You are solving a Bi-objective Knapsack Problem (BI-KP), where each item has a weight and two profit values: 
value1 and value2. The goal is to select a subset of items such that the total weight does not exceed a given capacity, 
while simultaneously maximizing the total value in both objective spaces.

Given an archive of non-dominated solutions, where each solution is a binary numpy array indicating item inclusion (1) or exclusion (0), 
and its corresponding objective is a tuple of two values (total value1, total value2), 
design a heuristic function named select_neighbor that selects one solution from the archive 
and applies a novel or hybrid local search operator to generate a neighbor solution from it.

You must ensure that the generated neighbor solution remains feasible.
Please perform an intelligent random selection from among the solutions that show promising potential for further local improvement. 
Using a creative local search strategy that you design yourself, go beyond standard approaches to develop a method 
that yields higher-quality solutions across multiple objectives. 
The function should return the new neighbor solution.)";

constexpr std::string_view k_task_bicvrp =
    R"(You are solving a Bi-objective Capacitated Vehicle Routing Problem (Bi-CVRP), where a single depot and multiple customers are located in 2D space. 
Each customer has a positive demand, and all vehicles in the fleet have identical capacity limits. 
The objective is to construct a set of routes, each starting and ending at the depot, such that:
- all customers are served,
- vehicle capacities are not exceeded on any route,
- two conflicting objectives are minimized:
  - total travel distance across all routes,
  - makespan (the length of the longest individual route).

Each solution in the archive is represented as a list of NumPy arrays, where each array denotes a single route 
(starting and ending at depot index 0), and is paired with a tuple of two objective values (total_distance, makespan). 

Your task is to implement a function named select_neighbor that selects one promising solution from the archive 
and applies a novel or hybrid local search operator to generate a feasible neighbor solution. 
You must ensure that vehicle capacity constraints are respected. 

Please perform an intelligent random selection among solutions that show potential for local improvement. 
Go beyond standard approaches to develop a method that yields higher-quality solutions across both objectives. 
The function should return the new neighbor solution.)";

constexpr std::string_view k_template_bitsp = R"py(import numpy as np
from typing import List, Tuple
import random 

def select_neighbor(
    archive: List[Tuple[np.ndarray, Tuple[float, float]]],
    instance: np.ndarray,
    distance_matrix_1: np.ndarray,
    distance_matrix_2: np.ndarray
) -> np.ndarray:
    """
    Select a promising solution from the archive and generate a neighbor solution from it.

    Args:
    archive: List of (solution, objective) pairs. Each solution is a numpy array of node IDs.
             Each objective is a tuple of two float values (cost in each space).
    instance: Numpy array of shape (N, 4). Each row contains coordinates in 2D spaces: (x1, y1, x2, y2).
    distance_matrix_1: Distance matrix in the first objective space.
    distance_matrix_2: Distance matrix in the second objective space.

    Returns:
    A new neighbor solution (numpy array).
    """
    base_solution = archive[0][0].copy()
    new_solution = base_solution.copy()
    new_solution[0], new_solution[1] = new_solution[1], new_solution[0]

    return new_solution
)py";

constexpr std::string_view k_template_tritsp = R"py(import numpy as np
from typing import List, Tuple
import random 

def select_neighbor(
    archive: List[Tuple[np.ndarray, Tuple[float, float, float]]],
    instance: np.ndarray,
    distance_matrix_1: np.ndarray,
    distance_matrix_2: np.ndarray,
    distance_matrix_3: np.ndarray
) -> np.ndarray:
    """
    Select a promising solution from the archive and generate a neighbor solution from it.

    Args:
    archive: List of (solution, objective) pairs. Each solution is a numpy array of node IDs.
             Each objective is a tuple of three float values (costs in each space).
    instance: Numpy array of shape (N, 6). Each row contains coordinates: (x1, y1, x2, y2, x3, y3).
    distance_matrix_1: Distance matrix in the first objective space.
    distance_matrix_2: Distance matrix in the second objective space.
    distance_matrix_3: Distance matrix in the third objective space.

    Returns:
    A new neighbor solution (numpy array).
    """
    base_solution = archive[0][0].copy()
    new_solution = base_solution.copy()
    new_solution[0], new_solution[1] = new_solution[1], new_solution[0]

    return new_solution
)py";

constexpr std::string_view k_template_bikp = R"py(import numpy as np
from typing import List, Tuple
import random 

def select_neighbor(
    archive: List[Tuple[np.ndarray, Tuple[float, float]]],
    weight_lst: np.ndarray,
    value1_lst: np.ndarray,
    value2_lst: np.ndarray,
    capacity: float 
) -> np.ndarray:
    """
    Select a promising solution from the archive and generate a neighbor solution from it.

    Args:
    archive: List of (solution, objective) pairs. Each solution is a binary numpy array (0/1) of item selections.
             Each objective is a tuple of two float values (total value1, total value2).
    weight_lst: Numpy array of shape (N,), item weights.
    value1_lst: Numpy array of shape (N,), item values for objective 1.
    value2_lst: Numpy array of shape (N,), item values for objective 2.
    capacity: Maximum allowed total weight.

    Returns:
    A new neighbor solution (numpy array).
    """
    base_solution = archive[0][0].copy()
    new_solution = base_solution.copy()
    new_solution[0], new_solution[1] = new_solution[1], new_solution[0]

    return new_solution
)py";

constexpr std::string_view k_template_bicvrp = R"py(import numpy as np
from typing import List, Tuple
import random 

def select_neighbor(
    archive: List[Tuple[np.ndarray, Tuple[float, float]]],
    coords: np.ndarray,
    demand: np.ndarray,
    distance_matrix: np.ndarray,
    capacity: float
) -> np.ndarray:
    """
    Select a promising solution from the archive and generate a neighbor solution from it.
    Args:
        archive: A list of tuples, where each tuple contains:
            - solution: A list of numpy arrays, each representing a vehicle route. 
                        Each route starts and ends at the depot (node index 0), e.g., [0, 3, 5, 0].
            - objective: A tuple of two float values (total_distance, makespan), 
                        representing the two objective values of the solution.
        
        coords: A numpy array of shape (n_nodes, 2), representing (x, y) coordinates of each node (depot + customers).
        demand: A numpy array of shape (n_nodes,), where demand[i] is the demand of node i. The depot has demand 0.
        distance_matrix: A numpy array of shape (n_nodes, n_nodes), where [i][j] is the Euclidean distance between node i and j.
        capacity: A float representing the maximum capacity of each vehicle.

    Returns:
        A new neighbor solution.
    """
    base_solution = archive[0][0].copy()
    new_solution = base_solution.copy()

    return new_solution
)py";

constexpr std::string_view k_closing =
    "Check syntax, code carefully before returning the final function. Do not give additional explanations.";

std::string describe_then_implement(Problem problem) {
    std::string out = "1. First, describe your new algorithm and main steps in one long, detailed sentence. "
                      "The description must be inside within boxed {{}}.\n"
                      "2. Next, implement the following Python function:\n";
    out += template_program(problem);
    out += "\n";
    out += k_closing;
    return out;
}

std::string enumerate_algorithms(std::span<const Heuristic> parents) {
    std::ostringstream os;
    for (std::size_t i = 0; i < parents.size(); ++i) {
        os << "No. " << i + 1 << " algorithm's description and code:\n";
        os << "Description: " << parents[i].description << "\n";
        os << "Code:\n" << parents[i].code() << "\n";
    }
    return os.str();
}

std::string suggestions_block(const std::optional<std::string>& suggestions) {
    if (!suggestions) return {};
    return "Here are some suggestions you can refer to:\n---\nSuggestions:\n" + *suggestions + "\n---\n\n";
}

ChatRequest make_request(std::string body, const std::string& model, double temperature, Purpose purpose) {
    ChatRequest r;
    r.messages = {{"system", std::string(k_system)}, {"user", std::move(body)}};
    r.model = model;
    r.temperature = temperature;
    r.purpose = purpose;
    return r;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

struct Fence {
    std::size_t begin, end;  // whole fence including markers
    std::string body;
};

std::vector<Fence> find_fences(std::string_view text) {
    std::vector<Fence> out;
    std::size_t pos = 0;
    while (true) {
        auto open = text.find("```", pos);
        if (open == std::string_view::npos) break;
        auto line_end = text.find('\n', open);
        if (line_end == std::string_view::npos) break;
        auto close = text.find("```", line_end + 1);
        if (close == std::string_view::npos) {
            out.push_back({open, text.size(), std::string(text.substr(line_end + 1))});
            break;
        }
        out.push_back({open, close + 3, std::string(text.substr(line_end + 1, close - line_end - 1))});
        pos = close + 3;
    }
    return out;
}

std::optional<std::string> first_boxed(const std::string& text) {
    static const std::regex boxed(R"(\{([^{}]*)\})");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), boxed); it != std::sregex_iterator(); ++it) {
        std::string inner = trim((*it)[1].str());
        if (!inner.empty()) return inner;
    }
    return std::nullopt;
}

}  // namespace

std::string_view system_prompt() { return k_system; }

std::string_view task_description(Problem problem) {
    switch (problem) {
        case Problem::bi_tsp: return k_task_bitsp;
        case Problem::tri_tsp: return k_task_tritsp;
        case Problem::bi_kp: return k_task_bikp;
        case Problem::bi_cvrp: return k_task_bicvrp;
    }
    return k_task_bitsp;
}

std::string_view template_program(Problem problem) {
    switch (problem) {
        case Problem::bi_tsp: return k_template_bitsp;
        case Problem::tri_tsp: return k_template_tritsp;
        case Problem::bi_kp: return k_template_bikp;
        case Problem::bi_cvrp: return k_template_bicvrp;
    }
    return k_template_bitsp;
}

ChatRequest build_init_prompt(Problem problem, const ModelRoles& roles) {
    std::string body(task_description(problem));
    body += "\n\n";
    body += describe_then_implement(problem);
    return make_request(std::move(body), roles.generator, roles.temperature, Purpose::init);
}

ChatRequest build_cluster_prompt(std::span<const std::string> snippets, const ModelRoles& roles) {
    if (snippets.size() < 2) throw std::invalid_argument("clustering needs at least two snippets");
    std::ostringstream os;
    os << "I have " << snippets.size() << " code snippets as follows:\n";
    for (std::size_t i = 0; i < snippets.size(); ++i) os << "Code " << i << ":\n" << snippets[i] << "\n";
    os << "\nAnalyze the logic of all the given code snippets carefully. Then group the snippets into clusters where "
          "each group contains codes with similar logic. Return the result as a JSON object where the keys are the "
          "group indices and the values are lists of code indices that belong to each group.\n\n"
          "For example:\n{\n  \"1\": [0, 2, 4],\n  \"2\": [1, 3],\n  \"3\": [5]\n}\n";
    return make_request(os.str(), roles.assessor, roles.temperature, Purpose::cluster);
}

ChatRequest build_reflection_prompt(Problem problem, std::span<const Heuristic> parents, const ModelRoles& roles) {
    if (parents.empty() || parents.size() > 4) throw std::invalid_argument("reflection takes one to four parents");
    std::ostringstream os;
    os << task_description(problem) << "\n\n";
    os << "I have " << parents.size() << " existing algorithms with their codes as follows:\n";
    os << enumerate_algorithms(parents) << "\n";
    os << "Please carefully analyze all of the above algorithms. Your task is to synthesize their ideas, identify "
          "recurring patterns, and point out opportunities for improvement.\n\n"
          "Your output should be a Suggestions section, where you:\n"
          "- Summarize key strengths shared across the implementations.\n"
          "- Identify limitations or blind spots that appear in multiple codes.\n"
          "- Propose hybrid or improved strategies that integrate strengths and overcome shortcomings, in a feasible "
          "running time.\n\n"
          "Output format:\n---\nSuggestions:\nWrite only one proposed hybrid or improved strategy that integrates "
          "strengths and overcomes shortcomings here.\n---\n\n"
          "Do not include any explanations, summaries, or new algorithms outside of this section.";
    return make_request(os.str(), roles.assessor, roles.temperature, Purpose::reflect);
}

std::string_view operator_tag(Operator op) {
    switch (op) {
        case Operator::e1: return "E1";
        case Operator::e2: return "E2";
        case Operator::m1: return "M1";
        case Operator::m2: return "M2";
    }
    return "E1";
}

Purpose purpose_of(Operator op) {
    switch (op) {
        case Operator::e1: return Purpose::e1;
        case Operator::e2: return Purpose::e2;
        case Operator::m1: return Purpose::m1;
        case Operator::m2: return Purpose::m2;
    }
    return Purpose::e1;
}

ChatRequest build_variation_prompt(Problem problem, Operator op, std::span<const Heuristic> parents,
                                   const std::optional<std::string>& suggestions, const ModelRoles& roles) {
    const bool crossover = op == Operator::e1 || op == Operator::e2;
    if (crossover && parents.size() < 2) throw std::invalid_argument("crossover operators take at least two parents");
    if (!crossover && parents.size() != 1) throw std::invalid_argument("mutation operators take exactly one parent");
    if (!crossover && suggestions)
        throw std::invalid_argument("mutation operators are generated without feedback");

    std::ostringstream os;
    os << task_description(problem) << "\n\n";
    if (crossover)
        os << "I have " << parents.size() << " existing algorithms with their codes as follows:\n";
    else
        os << "I have one algorithm with its code as follows.\n";
    os << enumerate_algorithms(parents) << "\n";

    switch (op) {
        case Operator::e1:
            os << "Analyze the logic of all the given code snippets carefully. Then identify the two code snippets "
                  "whose logic is most different from each other and create a new algorithm that is totally "
                  "different in both logic and form from both of them.\n\n";
            os << suggestions_block(suggestions);
            os << describe_then_implement(problem);
            break;
        case Operator::e2:
            os << suggestions_block(suggestions);
            os << "Please help me create a new algorithm that has a totally different form from the given ones but "
                  "can be motivated from them.\n"
                  "1. Firstly, identify the common backbone idea in the provided algorithms.\n"
                  "2. Secondly, based on the backbone idea, describe your new algorithm. The description must be "
                  "inside within boxed {{}}.\n"
                  "3. Thirdly, implement the following Python function:\n";
            os << template_program(problem) << "\n" << k_closing;
            break;
        case Operator::m1:
            os << "Please assist me in creating a new algorithm that has a different form but can be a modified "
                  "version of the algorithm provided. You may focus on refining either the selection phase or the "
                  "neighborhood search phase.\n\n";
            os << describe_then_implement(problem);
            break;
        case Operator::m2:
            os << "Please identify the main algorithm parameters and assist me in creating a new algorithm that has "
                  "a different parameter setting of the score function provided. You may focus on refining either "
                  "the selection phase or the neighborhood search phase.\n\n";
            os << describe_then_implement(problem);
            break;
    }
    return make_request(os.str(), roles.generator, roles.temperature, purpose_of(op));
}

ParsedHeuristic parse_heuristic_response(std::string_view text) {
    const auto fences = find_fences(text);
    std::string outside;
    std::size_t pos = 0;
    for (const auto& f : fences) {
        outside.append(text.substr(pos, f.begin - pos));
        outside.push_back('\n');
        pos = f.end;
    }
    if (pos < text.size()) outside.append(text.substr(pos));

    ParsedHeuristic out;
    auto description = first_boxed(outside);
    if (!description) description = first_boxed(std::string(text));
    if (!description) throw ParseError(ParseError::Part::description, "no boxed description in response");
    out.description = *description;

    if (!fences.empty()) {
        out.source = trim(fences.front().body);
    } else {
        std::size_t def = std::string_view::npos;
        std::size_t line = 0;
        while (line < text.size()) {
            auto first = text.find_first_not_of(" \t", line);
            if (first != std::string_view::npos && text.substr(first).starts_with("def ")) {
                def = line;
                break;
            }
            auto nl = text.find('\n', line);
            if (nl == std::string_view::npos) break;
            line = nl + 1;
        }
        if (def != std::string_view::npos) out.source = trim(text.substr(def));
    }
    if (out.source.empty()) throw ParseError(ParseError::Part::code, "no code in response");
    return out;
}

std::vector<std::vector<int>> parse_cluster_response(std::string_view text, std::size_t pool_size) {
    using K = ClusterParseError::Kind;
    auto open = text.find('{');
    if (open == std::string_view::npos) throw ClusterParseError(K::json, "no JSON object in response");
    int depth = 0;
    bool in_string = false;
    std::size_t close = std::string_view::npos;
    for (std::size_t i = open; i < text.size() && close == std::string_view::npos; ++i) {
        char c = text[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
        } else if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}' && --depth == 0) {
            close = i;
        }
    }
    if (close == std::string_view::npos) throw ClusterParseError(K::json, "unterminated JSON object");

    Json doc;
    try {
        doc = Json::parse(text.substr(open, close - open + 1));
    } catch (const Json::parse_error& e) {
        throw ClusterParseError(K::json, e.what());
    }

    std::vector<std::pair<std::string, std::vector<int>>> groups;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_array()) throw ClusterParseError(K::json, "cluster '" + key + "' is not a list");
        std::vector<int> members;
        for (const auto& v : value) {
            if (!v.is_number_integer()) throw ClusterParseError(K::json, "non-integer index in cluster '" + key + "'");
            members.push_back(v.get<int>());
        }
        groups.emplace_back(key, std::move(members));
    }
    const bool numeric = std::all_of(groups.begin(), groups.end(), [](const auto& g) {
        return !g.first.empty() && std::all_of(g.first.begin(), g.first.end(), [](unsigned char c) { return std::isdigit(c); });
    });
    if (numeric)
        std::stable_sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
            return std::stoll(a.first) < std::stoll(b.first);
        });

    std::set<int> seen;
    std::vector<std::vector<int>> out;
    for (auto& [key, members] : groups) {
        for (int m : members) {
            if (m < 0 || static_cast<std::size_t>(m) >= pool_size)
                throw ClusterParseError(K::range, "index " + std::to_string(m) + " outside the pool");
            if (!seen.insert(m).second) throw ClusterParseError(K::overlap, "index " + std::to_string(m) + " repeated");
        }
        if (!members.empty()) out.push_back(std::move(members));
    }
    if (seen.size() != pool_size) throw ClusterParseError(K::cover, "clusters do not cover the pool");
    return out;
}

std::string parse_suggestions(std::string_view text) {
    auto at = text.find("Suggestions:");
    std::string_view body = at == std::string_view::npos ? text : text.substr(at + 12);
    auto end = body.find("\n---");
    if (end != std::string_view::npos) body = body.substr(0, end);
    std::string out = trim(body);
    if (out.empty()) throw ParseError(ParseError::Part::suggestions, "empty suggestions");
    return out;
}

}  // namespace moco::llm
