#include "moco/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace moco {

namespace {

constexpr std::uint64_t k_eval_stream = 0x65766131;

bool fitness_dominates(const Heuristic& a, const Heuristic& b) { return heuristic_fitness_dominates(a, b); }

std::string mode_tag(PopulationMode m) { return m == PopulationMode::trim ? "trim" : "accumulate"; }

std::string optional_text(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "none"; }

}  // namespace

void EvolutionConfig::validate() const {
    if (population < 2) throw std::invalid_argument("population must be at least 2");
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must lie in [0, 1]");
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must lie in [0, 1]");
    if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("rho must lie in [0, 1]");
    if (instance_count == 0) throw std::invalid_argument("instance_count must be positive");
    if (init_attempts == 0) throw std::invalid_argument("init_attempts must be positive");
    if (cap && *cap < 2) throw std::invalid_argument("cap must be at least 2, got " + optional_text(cap));
    if (roles.temperature < 0.0) throw std::invalid_argument("temperature must be non-negative");
    grid.validate();
    budget.validate();
}

Json config_to_json(const EvolutionConfig& c) {
    Json budget = {{"max_iterations", nullptr},
                   {"time_limit_s", nullptr},
                   {"virtual_clock", c.budget.virtual_clock},
                   {"seconds_per_op", c.budget.seconds_per_op}};
    if (c.budget.max_iterations) budget["max_iterations"] = *c.budget.max_iterations;
    if (c.budget.time_limit_s) budget["time_limit_s"] = *c.budget.time_limit_s;
    Json doc = {
        {"population", c.population},
        {"generations", c.generations},
        {"epsilon", c.epsilon},
        {"gamma", c.gamma},
        {"rho", c.rho},
        {"grid", {{"k1", c.grid.k1}, {"k2", c.grid.k2}, {"sigma", c.grid.sigma}, {"moore", c.grid.moore}}},
        {"problem", std::string(problem_tag(c.problem))},
        {"instance_size", c.instance_size},
        {"instance_count", c.instance_count},
        {"instance_seed", c.instance_seed},
        {"budget", budget},
        {"seed", c.seed},
        {"init_attempts", c.init_attempts},
        {"builtin_fallback", c.builtin_fallback},
        {"mode", mode_tag(c.mode)},
        {"cap", nullptr},
        {"roles", {{"generator", c.roles.generator}, {"assessor", c.roles.assessor}, {"temperature", c.roles.temperature}}},
        {"worker_command", c.worker_command},
        {"worker_grace_s", c.worker_grace_s},
    };
    if (c.cap) doc["cap"] = *c.cap;
    if (c.cluster_cache_in) doc["cluster_cache_in"] = c.cluster_cache_in->string();
    return doc;
}

EvolutionConfig config_from_json(const Json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
    EvolutionConfig c;
    try {
        c.population = doc.value("population", c.population);
        c.generations = doc.value("generations", c.generations);
        c.epsilon = doc.value("epsilon", c.epsilon);
        c.gamma = doc.value("gamma", c.gamma);
        c.rho = doc.value("rho", c.rho);
        if (doc.contains("grid")) {
            const auto& g = doc["grid"];
            c.grid.k1 = g.value("k1", c.grid.k1);
            c.grid.k2 = g.value("k2", c.grid.k2);
            c.grid.sigma = g.value("sigma", c.grid.sigma);
            c.grid.moore = g.value("moore", c.grid.moore);
        }
        if (doc.contains("problem")) c.problem = parse_problem(doc["problem"].get<std::string>());
        c.instance_size = doc.value("instance_size", c.instance_size);
        c.instance_count = doc.value("instance_count", c.instance_count);
        c.instance_seed = doc.value("instance_seed", c.instance_seed);
        if (doc.contains("budget")) {
            const auto& b = doc["budget"];
            if (b.contains("max_iterations"))
                c.budget.max_iterations = b["max_iterations"].is_null()
                                              ? std::nullopt
                                              : std::optional<std::uint64_t>(b["max_iterations"].get<std::uint64_t>());
            if (b.contains("time_limit_s"))
                c.budget.time_limit_s = b["time_limit_s"].is_null()
                                            ? std::nullopt
                                            : std::optional<double>(b["time_limit_s"].get<double>());
            c.budget.virtual_clock = b.value("virtual_clock", c.budget.virtual_clock);
            c.budget.seconds_per_op = b.value("seconds_per_op", c.budget.seconds_per_op);
        }
        c.seed = doc.value("seed", c.seed);
        c.init_attempts = doc.value("init_attempts", c.init_attempts);
        c.builtin_fallback = doc.value("builtin_fallback", c.builtin_fallback);
        if (doc.contains("mode")) {
            const auto m = doc["mode"].get<std::string>();
            if (m == "trim")
                c.mode = PopulationMode::trim;
            else if (m == "accumulate")
                c.mode = PopulationMode::accumulate;
            else
                throw std::invalid_argument("unknown population mode '" + m + "'");
        }
        if (doc.contains("cap") && !doc["cap"].is_null()) c.cap = doc["cap"].get<std::size_t>();
        if (doc.contains("roles")) {
            const auto& r = doc["roles"];
            c.roles.generator = r.value("generator", c.roles.generator);
            c.roles.assessor = r.value("assessor", c.roles.assessor);
            c.roles.temperature = r.value("temperature", c.roles.temperature);
        }
        c.worker_command = doc.value("worker_command", c.worker_command);
        c.worker_grace_s = doc.value("worker_grace_s", c.worker_grace_s);
        if (doc.contains("cluster_cache_in") && !doc["cluster_cache_in"].is_null())
            c.cluster_cache_in = doc["cluster_cache_in"].get<std::string>();
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

std::string ClusterCache::key(Cell cell, std::span<const std::string> ids) {
    std::vector<std::string> sorted(ids.begin(), ids.end());
    std::sort(sorted.begin(), sorted.end());
    std::string joined;
    for (const auto& id : sorted) joined += id + "\n";
    return std::to_string(cell.first) + "," + std::to_string(cell.second) + "|" + llm::sha256_hex(joined);
}

std::optional<std::vector<std::vector<std::string>>> ClusterCache::find(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ClusterCache::store(const std::string& key, std::vector<std::vector<std::string>> partition) {
    entries_[key] = std::move(partition);
}

Json ClusterCache::to_json() const {
    Json doc = Json::object();
    for (const auto& [k, v] : entries_) doc[k] = v;
    return doc;
}

ClusterCache ClusterCache::from_json(const Json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("cluster cache must be a JSON object");
    ClusterCache cache;
    for (auto it = doc.begin(); it != doc.end(); ++it)
        cache.entries_[it.key()] = it.value().get<std::vector<std::vector<std::string>>>();
    return cache;
}

Json generation_to_json(const GenerationRecord& record) {
    Json offspring = Json::array();
    for (const auto& o : record.offspring) {
        Json e = {{"slot", o.slot},
                  {"parents", o.choice.parents},
                  {"mutation", o.choice.mutation},
                  {"local", o.choice.local},
                  {"cell", {o.choice.cell.first, o.choice.cell.second}},
                  {"op", o.op},
                  {"reflected", o.reflected}};
        if (o.child)
            e["child"] = o.child->id;
        else
            e["discarded"] = {{"reason", o.discard_reason}, {"detail", o.discard_detail}};
        offspring.push_back(std::move(e));
    }
    Json population = Json::array();
    for (const auto& h : record.population) population.push_back(heuristic_to_json(h));
    return {{"generation", record.generation}, {"offspring", offspring}, {"population", population},
            {"grid", record.grid}};
}

std::vector<Heuristic> fitness_front(std::span<const Heuristic> population) {
    std::vector<Heuristic> out;
    for (std::size_t i = 0; i < population.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < population.size() && !dominated; ++j)
            dominated = j != i && fitness_dominates(population[j], population[i]);
        if (!dominated) out.push_back(population[i]);
    }
    return out;
}

std::vector<Heuristic> trim_population(std::span<const Heuristic> population, const GridParams& grid_params) {
    auto kept = fitness_front(population);
    if (kept.size() >= 2 || population.size() <= kept.size()) return kept;

    const auto grid = ParetoFrontGrid::build(population, grid_params);
    std::set<std::string> kept_ids;
    for (const auto& h : kept) kept_ids.insert(h.id);

    struct Candidate {
        std::size_t dominators;
        int shares_cell;
        std::string id;
        std::size_t index;
    };
    std::vector<Candidate> rest;
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (kept_ids.count(population[i].id)) continue;
        std::size_t dominators = 0;
        for (const auto& other : population)
            if (fitness_dominates(other, population[i])) ++dominators;
        rest.push_back({dominators, 0, population[i].id, i});
    }
    while (kept.size() < 2 && !rest.empty()) {
        std::set<Cell> used;
        for (const auto& h : kept)
            if (auto c = grid.cell_of(h.id)) used.insert(*c);
        for (auto& c : rest) {
            auto cell = grid.cell_of(c.id);
            c.shares_cell = cell && used.count(*cell) ? 1 : 0;
        }
        auto best = std::min_element(rest.begin(), rest.end(), [](const Candidate& a, const Candidate& b) {
            return std::tie(a.dominators, a.shares_cell, a.id) < std::tie(b.dominators, b.shares_cell, b.id);
        });
        kept.push_back(population[best->index]);
        rest.erase(best);
    }
    return kept;
}

std::vector<Heuristic> cap_population(std::span<const Heuristic> population, std::size_t cap,
                                      const GridParams& grid_params) {
    if (population.size() <= cap) return {population.begin(), population.end()};
    const auto grid = ParetoFrontGrid::build(population, grid_params);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < population.size(); ++i) index.emplace(population[i].id, i);

    // Non-dominated members of each cell first, then the rest of the cell.
    std::vector<std::vector<std::size_t>> queues;
    for (const auto& [cell, raw] : grid.raw_cells()) {
        std::vector<std::size_t> q;
        const auto& nd = grid.cells().at(cell);
        for (const auto& id : nd) q.push_back(index.at(id));
        for (const auto& id : raw)
            if (std::find(nd.begin(), nd.end(), id) == nd.end()) q.push_back(index.at(id));
        queues.push_back(std::move(q));
    }
    std::vector<std::size_t> chosen;
    for (std::size_t round = 0; chosen.size() < cap; ++round) {
        bool any = false;
        for (const auto& q : queues) {
            if (round < q.size() && chosen.size() < cap) {
                chosen.push_back(q[round]);
                any = true;
            }
        }
        if (!any) break;
    }
    std::sort(chosen.begin(), chosen.end());
    std::vector<Heuristic> out;
    for (auto i : chosen) out.push_back(population[i]);
    return out;
}

EvolutionEngine::EvolutionEngine(EvolutionConfig config, llm::Backend& backend)
    : config_(std::move(config)), backend_(backend) {
    config_.validate();
    for (std::size_t i = 0; i < config_.instance_count; ++i)
        setup_.instances.emplace_back(generate_instance(config_.problem, config_.instance_size, config_.instance_seed + i));
    setup_.budget = config_.budget;
    setup_.seed = derive_seed(config_.seed, {k_eval_stream});
    setup_.worker_command = config_.worker_command;
    setup_.worker_grace_s = config_.worker_grace_s;
    setup_.frame_for(0);
    if (config_.cluster_cache_in && std::filesystem::exists(*config_.cluster_cache_in))
        cache_ = ClusterCache::from_json(read_json_file(*config_.cluster_cache_in));
}

const Heuristic& EvolutionEngine::member(const std::string& id) const {
    for (const auto& h : population_)
        if (h.id == id) return h;
    throw StateError("no population member '" + id + "'");
}

void EvolutionEngine::set_population(std::vector<Heuristic> population) {
    for (const auto& h : population)
        if (!h.fitness) throw StateError("population member '" + h.id + "' is unevaluated");
    if (population.size() < 2) throw std::invalid_argument("population needs at least two members");
    population_ = std::move(population);
}

const std::vector<Heuristic>& EvolutionEngine::initialize() {
    population_.clear();
    const auto request = llm::build_init_prompt(config_.problem, config_.roles);
    const std::size_t attempts = config_.init_attempts * config_.population;
    for (std::size_t a = 0; a < attempts && population_.size() < config_.population; ++a) {
        const std::string text = backend_.complete(request);
        Heuristic h;
        try {
            auto parsed = llm::parse_heuristic_response(text);
            h.description = std::move(parsed.description);
            h.source = std::move(parsed.source);
        } catch (const llm::ParseError&) {
            continue;
        }
        h.id = "init_" + std::to_string(population_.size());
        h.kind = BodyKind::external;
        h.lineage.op = "init";
        try {
            h.fitness = evaluate_heuristic(h, setup_);
        } catch (const EvaluationFailed&) {
            continue;
        }
        population_.push_back(std::move(h));
    }

    if (population_.size() < config_.population && config_.builtin_fallback) {
        std::vector<const BuiltinInfo*> pool;
        for (const auto& info : builtin_catalog())
            if (info.problem == config_.problem) pool.push_back(&info);
        for (std::size_t k = 0; !pool.empty() && population_.size() < config_.population; ++k) {
            auto h = make_builtin_heuristic(*pool[k % pool.size()], "init_fb_" + std::to_string(k));
            h.fitness = evaluate_heuristic(h, setup_);
            population_.push_back(std::move(h));
        }
    }
    if (population_.size() < 2)
        throw InitializationFailed("only " + std::to_string(population_.size()) + " heuristics after " +
                                   std::to_string(attempts) + " init attempts");
    return population_;
}

std::vector<std::vector<int>> EvolutionEngine::semantic_cluster(std::span<const Heuristic> pool, Cell cell) {
    if (pool.empty()) throw std::invalid_argument("cannot cluster an empty pool");
    if (pool.size() == 1) return {{0}};

    std::vector<std::string> ids;
    for (const auto& h : pool) ids.push_back(h.id);
    const auto key = ClusterCache::key(cell, ids);
    if (auto hit = cache_.find(key)) {
        std::vector<std::vector<int>> out;
        bool complete = true;
        for (const auto& group : *hit) {
            std::vector<int> idx;
            for (const auto& id : group) {
                auto it = std::find(ids.begin(), ids.end(), id);
                if (it == ids.end()) complete = false;
                else idx.push_back(static_cast<int>(it - ids.begin()));
            }
            if (!idx.empty()) out.push_back(std::move(idx));
        }
        if (complete) return out;
    }

    std::vector<std::string> snippets;
    for (const auto& h : pool) snippets.push_back(h.code());
    const auto request = llm::build_cluster_prompt(snippets, config_.roles);

    std::vector<std::vector<int>> partition;
    for (int attempt = 0; attempt < 2 && partition.empty(); ++attempt) {
        ++cluster_calls_;
        const std::string text = backend_.complete(request);
        try {
            partition = llm::parse_cluster_response(text, pool.size());
        } catch (const llm::ClusterParseError&) {
            partition.clear();
        }
    }
    if (partition.empty())
        for (std::size_t i = 0; i < pool.size(); ++i) partition.push_back({static_cast<int>(i)});

    std::vector<std::vector<std::string>> named;
    for (const auto& group : partition) {
        std::vector<std::string> g;
        for (int i : group) g.push_back(ids[static_cast<std::size_t>(i)]);
        named.push_back(std::move(g));
    }
    cache_.store(key, std::move(named));
    return partition;
}

ParentChoice EvolutionEngine::select_parents(const ParetoFrontGrid& grid, Rng& rng) {
    ParentChoice choice;
    const auto pool = select_mating_pool(grid, config_.epsilon, rng);
    choice.local = pool.local;
    choice.cell = pool.cell;

    if (pool.local) {
        std::vector<Heuristic> members;
        for (const auto& id : pool.ids) members.push_back(member(id));
        const auto clusters = semantic_cluster(members, pool.cell);
        const std::size_t ci = rng.below(clusters.size());
        const auto& own = clusters[ci];
        const auto& first = pool.ids[static_cast<std::size_t>(own[rng.below(own.size())])];
        const bool mutate = rng.uniform() < config_.gamma;
        if (mutate || clusters.size() == 1) {
            choice.mutation = true;
            choice.parents = {first};
            return choice;
        }
        std::vector<int> others;
        for (std::size_t c = 0; c < clusters.size(); ++c)
            if (c != ci) others.insert(others.end(), clusters[c].begin(), clusters[c].end());
        choice.parents = {first, pool.ids[static_cast<std::size_t>(others[rng.below(others.size())])]};
        return choice;
    }

    if (pool.ids.size() == 1) {
        choice.mutation = true;
        choice.parents = {pool.ids.front()};
        return choice;
    }
    const auto picks = rng.sample(pool.ids.size(), 2);
    choice.parents = {pool.ids[picks[0]], pool.ids[picks[1]]};
    return choice;
}

OffspringRecord EvolutionEngine::make_offspring(const ParentChoice& choice, int generation, std::size_t slot,
                                                Rng& rng) {
    OffspringRecord rec;
    rec.slot = slot;
    rec.choice = choice;
    std::vector<Heuristic> parents;
    for (const auto& id : choice.parents) parents.push_back(member(id));

    llm::Operator op;
    std::optional<std::string> suggestions;
    if (choice.mutation) {
        op = rng.bernoulli(0.5) ? llm::Operator::m1 : llm::Operator::m2;
    } else {
        op = rng.bernoulli(0.5) ? llm::Operator::e1 : llm::Operator::e2;
        if (rng.uniform() < config_.rho) {
            rec.reflected = true;
            const auto text = backend_.complete(llm::build_reflection_prompt(config_.problem, parents, config_.roles));
            try {
                suggestions = llm::parse_suggestions(text);
            } catch (const llm::ParseError&) {
            }
        }
    }
    rec.op = std::string(llm::operator_tag(op));

    const auto request = llm::build_variation_prompt(config_.problem, op, parents, suggestions, config_.roles);
    const std::string text = backend_.complete(request);
    Heuristic child;
    try {
        auto parsed = llm::parse_heuristic_response(text);
        child.description = std::move(parsed.description);
        child.source = std::move(parsed.source);
    } catch (const llm::ParseError& e) {
        rec.discard_reason = "parse";
        rec.discard_detail = e.what();
        return rec;
    }
    char id[32];
    std::snprintf(id, sizeof id, "g%03d_s%02zu", generation, slot);
    child.id = id;
    child.kind = BodyKind::external;
    child.lineage = {choice.parents, rec.op, generation};
    try {
        child.fitness = evaluate_heuristic(child, setup_);
    } catch (const EvaluationFailed& e) {
        rec.discard_reason = std::string("evaluation: ") + e.what();
        rec.discard_detail = e.diagnostics();
        return rec;
    }
    rec.child = std::move(child);
    return rec;
}

GenerationRecord EvolutionEngine::step(int generation) {
    if (population_.size() < 2) throw StateError("step before initialize");
    GenerationRecord record;
    record.generation = generation;
    const auto grid = ParetoFrontGrid::build(population_, config_.grid);
    record.grid = grid_to_json(grid);

    std::vector<Heuristic> children;
    for (std::size_t slot = 0; slot < config_.population; ++slot) {
        Rng rng(derive_seed(config_.seed, {static_cast<std::uint64_t>(generation), slot}));
        const auto choice = select_parents(grid, rng);
        auto rec = make_offspring(choice, generation, slot, rng);
        if (rec.child) children.push_back(*rec.child);
        record.offspring.push_back(std::move(rec));
    }

    std::vector<Heuristic> merged = population_;
    merged.insert(merged.end(), children.begin(), children.end());
    if (config_.mode == PopulationMode::trim) merged = trim_population(merged, config_.grid);
    if (config_.cap) merged = cap_population(merged, *config_.cap, config_.grid);
    population_ = std::move(merged);
    record.population = population_;
    return record;
}

namespace {

std::vector<ObjectiveVector> fitness_points(std::span<const Heuristic> hs) {
    std::vector<ObjectiveVector> out;
    for (const auto& h : hs) out.push_back({h.fitness->e1, h.fitness->e2});
    return out;
}

std::string fmt(double v) {
    if (!std::isfinite(v)) return "nan";
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::string metrics_csv(const EvolutionOutcome& outcome) {
    std::vector<metrics::LabeledFront> fronts;
    std::vector<const std::vector<Heuristic>*> pops;
    fronts.push_back({"gen_000", fitness_points(fitness_front(outcome.initial))});
    pops.push_back(&outcome.initial);
    for (const auto& g : outcome.generations) {
        char label[16];
        std::snprintf(label, sizeof label, "gen_%03d", g.generation);
        fronts.push_back({label, fitness_points(fitness_front(g.population))});
        pops.push_back(&g.population);
    }

    std::optional<metrics::NormalizedFronts> norm;
    try {
        norm = metrics::normalize_fronts(fronts);
    } catch (const std::invalid_argument&) {
    }
    std::vector<ObjectiveVector> reference;
    if (norm) {
        std::vector<ObjectiveVector> all;
        for (const auto& f : norm->fronts) all.insert(all.end(), f.points.begin(), f.points.end());
        for (auto i : nondominated_indices(all)) reference.push_back(all[i]);
    }

    std::ostringstream csv;
    csv << "front,size,hv,normalized_hv,igd,swdi,cdi,best_e1,best_e2\n";
    for (std::size_t k = 0; k < fronts.size(); ++k) {
        double hv = std::nan(""), nhv = std::nan(""), gd = std::nan("");
        if (norm) {
            const double r[] = {1.1, 1.1};
            hv = metrics::hypervolume_exact(norm->fronts[k].points, r);
            nhv = hv / (1.1 * 1.1);
            gd = metrics::igd(norm->fronts[k].points, reference);
        }
        std::vector<std::vector<double>> vecs;
        for (const auto& h : *pops[k]) vecs.push_back(metrics::source_vector(h.code()));
        const auto labels = metrics::cosine_leader_cluster(vecs);
        const double diversity = metrics::swdi(labels);
        const double spread = vecs.size() >= 2 ? metrics::cdi(vecs) : 0.0;
        double b1 = std::numeric_limits<double>::infinity(), b2 = b1;
        for (const auto& p : fronts[k].points) {
            b1 = std::min(b1, p[0]);
            b2 = std::min(b2, p[1]);
        }
        csv << fronts[k].label << ',' << fronts[k].points.size() << ',' << fmt(hv) << ',' << fmt(nhv) << ','
            << fmt(gd) << ',' << fmt(diversity) << ',' << fmt(spread) << ',' << fmt(b1) << ',' << fmt(b2) << '\n';
    }
    return csv.str();
}

}  // namespace

std::map<llm::Purpose, std::vector<std::string>> default_mock_table(Problem problem) {
    std::vector<std::string> programs;
    for (const auto& info : builtin_catalog())
        if (info.problem == problem)
            programs.push_back("{" + info.description + "}\n```python\n" + std::string(info.source) + "\n```\n");
    std::map<llm::Purpose, std::vector<std::string>> table;
    table[llm::Purpose::init] = programs;
    for (auto p : {llm::Purpose::e1, llm::Purpose::e2, llm::Purpose::m1, llm::Purpose::m2}) table[p] = programs;
    table[llm::Purpose::cluster] = {"{\"1\": [0, 1]}", "{\"1\": [0], \"2\": [1]}"};
    table[llm::Purpose::reflect] = {
        "---\nSuggestions:\nBias the move toward the objective where the picked solution is weakest.\n---\n"};
    return table;
}

EvolutionOutcome run_evolution(const EvolutionConfig& config, llm::Backend& backend,
                               const std::optional<std::filesystem::path>& run_dir) {
    std::optional<llm::Transcript> transcript;
    std::optional<llm::RecordingBackend> recorder;
    llm::Backend* active = &backend;
    if (run_dir) {
        std::filesystem::create_directories(*run_dir / "generations");
        write_json_file(*run_dir / "config.json", config_to_json(config));
        transcript.emplace(*run_dir / "transcript.jsonl");
        recorder.emplace(backend, *transcript);
        active = &*recorder;
    }

    EvolutionEngine engine(config, *active);
    EvolutionOutcome outcome;
    outcome.initial = engine.initialize();
    if (run_dir) {
        Json init = Json::array();
        for (const auto& h : outcome.initial) init.push_back(heuristic_to_json(h));
        write_json_file(*run_dir / "initial_population.json", init);
    }

    for (std::size_t g = 1; g <= config.generations; ++g) {
        auto record = engine.step(static_cast<int>(g));
        if (run_dir) {
            char name[32];
            std::snprintf(name, sizeof name, "gen_%03zu.json", g);
            write_json_file(*run_dir / "generations" / name, generation_to_json(record));
            write_json_file(*run_dir / "cluster_cache.json", engine.cluster_cache().to_json());
        }
        outcome.generations.push_back(std::move(record));
    }
    outcome.population = engine.population();
    outcome.front = fitness_front(outcome.population);

    if (run_dir) {
        Json front = Json::array();
        for (const auto& h : outcome.front) front.push_back(heuristic_to_json(h));
        write_json_file(*run_dir / "pareto_front.json", front);
        write_json_file(*run_dir / "cluster_cache.json", engine.cluster_cache().to_json());
        write_text_file(*run_dir / "metrics.csv", metrics_csv(outcome));
    }
    return outcome;
}

}  // namespace moco
