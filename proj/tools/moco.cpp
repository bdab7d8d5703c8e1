#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>

#include "moco/baselines.hpp"
#include "moco/evolution.hpp"
#include "moco/metrics.hpp"
#include "moco/worker.hpp"

using namespace moco;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string out;
};

std::vector<std::string> split_command(const std::string& text) {
    std::istringstream is(text);
    std::vector<std::string> out;
    for (std::string tok; is >> tok;) out.push_back(tok);
    return out;
}

void emit(const Globals& g, const Json& doc, const std::string& fallback_name) {
    if (g.out.empty()) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::filesystem::path path(g.out);
    if (std::filesystem::is_directory(path)) path /= fallback_name;
    write_json_file(path, doc);
    std::cerr << "wrote " << path.string() << "\n";
}

Heuristic heuristic_from_spec(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) {
        const auto id = spec.substr(8);
        const auto* info = find_builtin(id);
        if (!info) throw std::invalid_argument("unknown builtin '" + id + "'");
        return make_builtin_heuristic(*info, id);
    }
    if (spec.rfind("file:", 0) == 0) {
        Heuristic h;
        h.id = "external";
        h.kind = BodyKind::external;
        h.source = read_text_file(spec.substr(5));
        return h;
    }
    throw std::invalid_argument("heuristic must be builtin:<id> or file:<path>");
}

std::unique_ptr<llm::Backend> make_backend(const Json& spec, Problem problem) {
    const auto kind = spec.value("kind", "mock");
    if (kind == "mock") {
        if (spec.contains("table")) {
            const auto& t = spec["table"];
            return std::make_unique<llm::MockBackend>(
                llm::mock_table_from_json(t.is_string() ? read_json_file(t.get<std::string>()) : t));
        }
        return std::make_unique<llm::MockBackend>(default_mock_table(problem));
    }
    if (kind == "replay") {
        const auto t = llm::Transcript::load(spec.at("transcript").get<std::string>());
        return std::make_unique<llm::ReplayBackend>(t);
    }
    if (kind == "live") {
        llm::LiveConfig c;
        c.base_url = spec.value("base_url", c.base_url);
        c.path = spec.value("path", c.path);
        c.api_key_env = spec.value("api_key_env", c.api_key_env);
        c.max_attempts = spec.value("max_attempts", c.max_attempts);
        c.timeout_s = spec.value("timeout_s", c.timeout_s);
        return std::make_unique<llm::LiveBackend>(c);
    }
    throw std::invalid_argument("unknown backend kind '" + kind + "'");
}

int cmd_gen(const Globals& g, const std::string& problem, std::size_t n, std::size_t count) {
    const Problem p = parse_problem(problem);
    std::vector<Json> docs;
    for (std::size_t i = 0; i < count; ++i) docs.push_back(instance_to_json(generate_instance(p, n, g.seed + i)));
    if (g.out.empty()) {
        for (const auto& d : docs) std::cout << d.dump() << "\n";
        return 0;
    }
    for (std::size_t i = 0; i < count; ++i) {
        const auto name = problem + std::to_string(n) + "_" + std::to_string(g.seed + i) + ".json";
        write_json_file(std::filesystem::path(g.out) / name, docs[i]);
    }
    std::cerr << "wrote " << count << " instances to " << g.out << "\n";
    return 0;
}

int cmd_semo(const Globals& g, const std::string& spec, const std::string& problem, std::size_t n,
             std::size_t count, std::optional<std::uint64_t> iterations, std::optional<double> time_limit,
             bool virtual_clock, const std::string& worker) {
    const Problem p = parse_problem(problem);
    std::vector<ProblemContext> contexts;
    for (std::size_t i = 0; i < count; ++i) contexts.emplace_back(generate_instance(p, n, g.seed + i));
    SemoBudget budget;
    budget.max_iterations = iterations;
    budget.time_limit_s = time_limit;
    if (!iterations && !time_limit) budget.max_iterations = 2000;
    budget.virtual_clock = virtual_clock;
    budget.validate();

    const auto h = heuristic_from_spec(spec);
    const BuiltinInfo* native = h.kind == BodyKind::builtin ? find_builtin(h.builtin_id) : match_builtin_source(h.source);
    if (native && native->problem != p)
        throw std::invalid_argument(native->id + " targets " + std::string(problem_tag(native->problem)));

    Json runs = Json::array();
    std::vector<std::vector<ObjectiveVector>> archives;
    std::vector<double> seconds;
    if (native) {
        for (std::size_t i = 0; i < count; ++i) {
            const auto r = run_semo(contexts[i], native->neighbor, budget, derive_seed(g.seed, {i}));
            archives.push_back(r.archive.objectives());
            seconds.push_back(r.elapsed_s);
            runs.push_back(semo_result_to_json(r));
        }
    } else {
        const auto command = split_command(worker);
        if (command.empty()) throw std::invalid_argument("file heuristics need --worker");
        worker::EvalJob job;
        job.problem = p;
        job.source = h.source;
        job.budget = budget;
        job.budget.virtual_clock = false;
        for (std::size_t i = 0; i < count; ++i) {
            job.instances.push_back(contexts[i].instance());
            job.seeds.push_back(derive_seed(g.seed, {i}));
        }
        const double timeout = 5.0 + (time_limit ? *time_limit * count : 600.0);
        const auto report = worker::run_worker(command, job, timeout);
        if (report.status != worker::Status::ok)
            throw std::runtime_error("worker status " + std::string(worker::status_tag(report.status)) + ": " +
                                     report.diagnostics);
        if (auto problem_text = worker::verify_report(report, job)) throw std::runtime_error(*problem_text);
        const auto doc = worker::report_to_json(report, p);
        for (std::size_t i = 0; i < report.results.size(); ++i) {
            std::vector<ObjectiveVector> objs;
            for (const auto& e : report.results[i].archive) objs.push_back(e.objectives);
            archives.push_back(objs);
            seconds.push_back(report.results[i].elapsed_s);
            runs.push_back(doc["results"][i]);
        }
    }

    double hv_sum = 0.0, total_s = 0.0;
    Json summary = Json::array();
    std::printf("instance,archive_size,normalized_hv,seconds\n");
    for (std::size_t i = 0; i < archives.size(); ++i) {
        const auto frame = metrics::reference_frame(p, n);
        const double hv = frame ? archive_normalized_hv(archives[i], *frame) : std::nan("");
        hv_sum += hv;
        total_s += seconds[i];
        std::printf("%zu,%zu,%.6f,%.6f\n", i, archives[i].size(), hv, seconds[i]);
    }
    const double mean = hv_sum / static_cast<double>(archives.size());
    std::printf("mean_normalized_hv=%.6f total_seconds=%.6f\n", mean, total_s);
    if (!g.out.empty()) {
        const std::filesystem::path dir(g.out);
        for (std::size_t i = 0; i < runs.size(); ++i) write_json_file(dir / ("instance_" + std::to_string(i) + ".json"), runs[i]);
        write_json_file(dir / "summary.json",
                        {{"heuristic", spec}, {"mean_normalized_hv", mean}, {"total_seconds", total_s}});
    }
    return 0;
}

int cmd_evolve(Globals g, const std::string& config_path) {
    const Json doc = read_json_file(config_path);
    auto config = config_from_json(doc);
    if (doc.contains("seed") == false) config.seed = g.seed;
    auto backend = make_backend(doc.value("backend", Json::object()), config.problem);
    std::optional<std::filesystem::path> dir;
    if (!g.out.empty()) dir = g.out;
    EvolutionOutcome outcome;
    try {
        outcome = run_evolution(config, *backend, dir);
    } catch (const InitializationFailed& e) {
        std::cerr << "initialization failed: " << e.what() << "\n";
        if (dir) std::cerr << "diagnostics: " << (*dir / "transcript.jsonl").string() << "\n";
        return 1;
    }
    std::printf("%-12s %12s %12s %s\n", "id", "e1", "e2", "op");
    for (const auto& h : outcome.front)
        std::printf("%-12s %12.6f %12.6f %s\n", h.id.c_str(), h.fitness->e1, h.fitness->e2, h.lineage.op.c_str());
    return 0;
}

int cmd_baseline(const Globals& g, const std::string& algorithm, const std::string& problem, std::size_t n,
                 std::optional<std::size_t> pop, std::optional<std::size_t> gens) {
    const ProblemContext ctx(generate_instance(parse_problem(problem), n, g.seed));
    baselines::BaselineResult result;
    const auto seed = derive_seed(g.seed, {1});
    if (algorithm == "nsga2") {
        baselines::Nsga2Params params;
        if (pop) params.pop_size = *pop;
        if (gens) params.generations = *gens;
        result = baselines::nsga2_run(ctx, params, seed);
    } else if (algorithm == "moead") {
        baselines::MoeadParams params;
        if (pop) params.subproblems = *pop;
        if (gens) params.generations = *gens;
        params.neighborhood = std::min(params.neighborhood, params.subproblems);
        result = baselines::moead_run(ctx, params, seed);
    } else if (algorithm == "semo") {
        result = baselines::semo_baseline(ctx, seed);
    } else {
        throw std::invalid_argument("unknown baseline '" + algorithm + "'");
    }
    if (auto frame = metrics::reference_frame(ctx.problem(), ctx.size())) {
        const auto objs = result.front.objectives();
        std::printf("%s front=%zu normalized_hv=%.6f evaluations=%llu\n", algorithm.c_str(), result.front.size(),
                    archive_normalized_hv(objs, *frame), static_cast<unsigned long long>(result.evaluations));
    }
    emit(g, baseline_result_to_json(result), algorithm + ".json");
    return 0;
}

struct FrontFile {
    std::vector<ObjectiveVector> points;
    std::vector<std::string> sources;
};

// Accepts archives ([{objectives}] or {"archive": [...]}) and heuristic
// fronts ([{fitness: {e1, e2}, ...}]).
FrontFile read_front(const Json& doc) {
    const Json& list = doc.is_object() && doc.contains("archive") ? doc["archive"] : doc;
    if (!list.is_array()) throw std::invalid_argument("front file must hold an array");
    FrontFile out;
    for (const auto& e : list) {
        if (e.contains("objectives")) {
            out.points.push_back(e["objectives"].get<ObjectiveVector>());
        } else {
            const auto h = heuristic_from_json(e);
            if (!h.fitness) throw std::invalid_argument("heuristic '" + h.id + "' has no fitness");
            out.points.push_back({h.fitness->e1, h.fitness->e2});
            out.sources.push_back(h.code());
        }
    }
    return out;
}

int cmd_metrics(const Globals& g, const std::vector<std::string>& files, const std::string& problem, std::size_t n) {
    std::vector<metrics::LabeledFront> fronts;
    std::vector<FrontFile> parsed;
    for (const auto& f : files) {
        parsed.push_back(read_front(read_json_file(f)));
        fronts.push_back({f, parsed.back().points});
    }
    std::optional<std::size_t> dim;
    for (const auto& f : fronts)
        for (const auto& p : f.points) {
            if (dim && *dim != p.size()) throw std::invalid_argument("fronts mix objective dimensions");
            dim = p.size();
        }

    std::optional<metrics::ReferenceFrame> frame;
    if (!problem.empty()) {
        frame = metrics::reference_frame(parse_problem(problem), n);
        if (!frame) throw std::invalid_argument("no tabulated frame for " + problem + std::to_string(n));
        if (dim && frame->reference.size() != *dim) throw std::invalid_argument("frame dimension mismatch");
    }

    std::vector<metrics::LabeledFront> scored = fronts;
    std::vector<ObjectiveVector> reference;
    if (!frame) {
        scored = metrics::normalize_fronts(fronts).fronts;
    }
    std::vector<ObjectiveVector> all;
    for (const auto& f : scored) all.insert(all.end(), f.points.begin(), f.points.end());
    for (auto i : nondominated_indices(all)) reference.push_back(all[i]);

    std::ostringstream csv;
    csv << "front,size,hv,normalized_hv,igd,swdi,cdi\n";
    for (std::size_t k = 0; k < fronts.size(); ++k) {
        double hv, nhv;
        if (frame) {
            nhv = archive_normalized_hv(fronts[k].points, *frame);
            hv = metrics::hypervolume_exact(fronts[k].points, frame->canonical().reference);
        } else {
            const ObjectiveVector r(dim.value_or(2), 1.1);
            hv = metrics::hypervolume_exact(scored[k].points, r);
            nhv = hv / std::pow(1.1, static_cast<double>(r.size()));
        }
        const double gd = metrics::igd(scored[k].points, reference);
        double diversity = std::nan(""), spread = std::nan("");
        if (!parsed[k].sources.empty()) {
            std::vector<std::vector<double>> vecs;
            for (const auto& src : parsed[k].sources) vecs.push_back(metrics::source_vector(src));
            diversity = metrics::swdi(metrics::cosine_leader_cluster(vecs));
            if (vecs.size() >= 2) spread = metrics::cdi(vecs);
        }
        char line[512];
        std::snprintf(line, sizeof line, "%s,%zu,%.10g,%.10g,%.10g,%.10g,%.10g\n", fronts[k].label.c_str(),
                      fronts[k].points.size(), hv, nhv, gd, diversity, spread);
        csv << line;
    }
    std::cout << csv.str();
    if (!g.out.empty()) {
        std::filesystem::path path(g.out);
        if (std::filesystem::is_directory(path)) path /= "metrics.csv";
        write_text_file(path, csv.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-objective heuristic design workbench"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Base random seed");
    app.add_option("--jobs", g.jobs, "Worker parallelism (evaluation is sequential)")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Output file or directory");

    std::string problem = "bitsp";
    std::size_t n = 20;
    std::size_t count = 1;

    auto* gen = app.add_subcommand("gen", "Generate random instances");
    gen->add_option("--problem", problem, "bitsp | tritsp | bicvrp | bikp");
    gen->add_option("--n", n, "Instance size");
    gen->add_option("--count", count, "Number of instances (seeds seed, seed+1, ...)");

    std::string spec;
    std::optional<std::uint64_t> iterations;
    std::optional<double> time_limit;
    bool virtual_clock = false;
    std::string worker;
    auto* semo = app.add_subcommand("semo", "Evaluate one heuristic with SEMO");
    semo->add_option("heuristic", spec, "builtin:<id> or file:<path>")->required();
    semo->add_option("--problem", problem);
    semo->add_option("--n", n);
    semo->add_option("--instances", count);
    semo->add_option("--iterations", iterations);
    semo->add_option("--time-limit", time_limit);
    semo->add_flag("--virtual-clock", virtual_clock, "Deterministic operation-count clock");
    semo->add_option("--worker", worker, "Worker command for external heuristics");

    std::string config_path;
    auto* evolve = app.add_subcommand("evolve", "Run heuristic evolution");
    evolve->add_option("config", config_path, "Run config JSON")->required();

    std::string algorithm;
    std::optional<std::size_t> pop, gens;
    auto* baseline = app.add_subcommand("baseline", "Run a baseline optimizer");
    baseline->add_option("algorithm", algorithm, "nsga2 | moead | semo")->required();
    baseline->add_option("--problem", problem);
    baseline->add_option("--n", n);
    baseline->add_option("--pop", pop);
    baseline->add_option("--gens", gens);

    std::vector<std::string> files;
    std::string frame_problem;
    auto* metrics_cmd = app.add_subcommand("metrics", "Score saved fronts");
    metrics_cmd->add_option("fronts", files, "Archive JSON files")->required();
    metrics_cmd->add_option("--problem", frame_problem, "Problem for the tabulated reference frame");
    metrics_cmd->add_option("--n", n);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) return cmd_gen(g, problem, n, count);
        if (*semo) return cmd_semo(g, spec, problem, n, count, iterations, time_limit, virtual_clock, worker);
        if (*evolve) return cmd_evolve(g, config_path);
        if (*baseline) return cmd_baseline(g, algorithm, problem, n, pop, gens);
        if (*metrics_cmd) return cmd_metrics(g, files, frame_problem, n);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
