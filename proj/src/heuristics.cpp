#include "moco/heuristics.hpp"

#include <numeric>
#include <sstream>

#include "moco/worker.hpp"

namespace moco {

std::string Heuristic::code() const {
    if (kind == BodyKind::external) return source;
    const BuiltinInfo* info = find_builtin(builtin_id);
    return info ? std::string(info->source) : std::string();
}

Heuristic make_builtin_heuristic(const BuiltinInfo& info, std::string id) {
    Heuristic h;
    h.id = std::move(id);
    h.description = info.description;
    h.kind = BodyKind::builtin;
    h.builtin_id = info.id;
    h.lineage.op = "builtin";
    return h;
}

Problem EvaluationSetup::problem() const {
    if (instances.empty()) throw std::invalid_argument("evaluation needs at least one instance");
    return instances.front().problem();
}

metrics::ReferenceFrame EvaluationSetup::frame_for(std::size_t i) const {
    if (frame) return *frame;
    const auto& ctx = instances.at(i);
    auto f = metrics::reference_frame(ctx.problem(), ctx.size());
    if (!f)
        throw std::invalid_argument("no reference frame tabulated for " + std::string(problem_tag(ctx.problem())) +
                                    std::to_string(ctx.size()));
    return *f;
}

double archive_normalized_hv(std::span<const ObjectiveVector> canonical_points, const metrics::ReferenceFrame& frame) {
    if (frame.orientation == metrics::Orientation::minimize) return metrics::normalized_hv(canonical_points, frame);
    std::vector<ObjectiveVector> raw(canonical_points.begin(), canonical_points.end());
    for (auto& p : raw)
        for (auto& v : p) v = -v;
    return metrics::normalized_hv(raw, frame);
}

namespace {

void check_setup(const EvaluationSetup& setup) {
    const Problem p = setup.problem();
    for (const auto& ctx : setup.instances)
        if (ctx.problem() != p) throw std::invalid_argument("evaluation instances mix problem families");
    setup.budget.validate();
}

FitnessVector evaluate_native(const NeighborFn& neighbor, const EvaluationSetup& setup) {
    FitnessVector fit;
    for (std::size_t i = 0; i < setup.instances.size(); ++i) {
        SemoResult r;
        try {
            r = run_semo(setup.instances[i], neighbor, setup.budget, derive_seed(setup.seed, {i}));
        } catch (const HeuristicFault& e) {
            std::ostringstream os;
            os << "instance " << i << ", iteration " << e.iteration() << ": " << e.what();
            throw EvaluationFailed("heuristic fault", os.str());
        }
        if (r.iterations > 0 &&
            static_cast<double>(r.rejected_infeasible) > setup.infeasible_limit * static_cast<double>(r.iterations)) {
            std::ostringstream os;
            os << "instance " << i << ": " << r.rejected_infeasible << " of " << r.iterations
               << " candidates infeasible";
            throw EvaluationFailed("infeasible flood", os.str());
        }
        auto objs = r.archive.objectives();
        fit.per_instance_hv.push_back(archive_normalized_hv(objs, setup.frame_for(i)));
        fit.iterations.push_back(r.iterations);
        fit.e2 += r.elapsed_s;
    }
    return fit;
}

FitnessVector evaluate_in_worker(const std::string& source, const EvaluationSetup& setup) {
    if (setup.worker_command.empty())
        throw EvaluationFailed("no worker", "external heuristic needs a worker command");
    worker::EvalJob job;
    job.problem = setup.problem();
    job.source = source;
    job.budget = setup.budget;
    job.budget.virtual_clock = false;
    for (std::size_t i = 0; i < setup.instances.size(); ++i) {
        job.instances.push_back(setup.instances[i].instance());
        job.seeds.push_back(derive_seed(setup.seed, {i}));
    }
    double timeout = setup.worker_grace_s;
    if (setup.budget.time_limit_s)
        timeout += *setup.budget.time_limit_s * static_cast<double>(setup.instances.size());
    else
        timeout += 600.0;

    worker::EvalReport report;
    try {
        report = worker::run_worker(setup.worker_command, job, timeout);
    } catch (const worker::WorkerError& e) {
        throw EvaluationFailed("worker fault", e.what());
    }
    if (report.status != worker::Status::ok)
        throw EvaluationFailed(std::string(worker::status_tag(report.status)), report.diagnostics);
    if (auto problem = worker::verify_report(report, job)) throw EvaluationFailed("invalid report", *problem);

    FitnessVector fit;
    for (std::size_t i = 0; i < report.results.size(); ++i) {
        std::vector<ObjectiveVector> objs;
        for (const auto& e : report.results[i].archive) objs.push_back(e.objectives);
        fit.per_instance_hv.push_back(archive_normalized_hv(objs, setup.frame_for(i)));
        fit.iterations.push_back(report.results[i].iterations);
        fit.e2 += report.results[i].elapsed_s;
    }
    return fit;
}

}  // namespace

FitnessVector evaluate_heuristic(const Heuristic& h, const EvaluationSetup& setup) {
    check_setup(setup);
    const BuiltinInfo* info = nullptr;
    if (h.kind == BodyKind::builtin) {
        info = find_builtin(h.builtin_id);
        if (!info) throw EvaluationFailed("unknown builtin", h.builtin_id);
    } else {
        info = match_builtin_source(h.source);
    }
    if (info && info->problem != setup.problem())
        throw EvaluationFailed("wrong problem family", info->id + " targets " + std::string(problem_tag(info->problem)));

    FitnessVector fit = info ? evaluate_native(info->neighbor, setup) : evaluate_in_worker(h.source, setup);
    const double mean =
        std::accumulate(fit.per_instance_hv.begin(), fit.per_instance_hv.end(), 0.0) / fit.per_instance_hv.size();
    fit.e1 = -mean;
    return fit;
}

Json heuristic_to_json(const Heuristic& h) {
    Json doc = {{"id", h.id}, {"description", h.description}, {"kind", h.kind == BodyKind::builtin ? "builtin" : "external"}};
    if (h.kind == BodyKind::builtin)
        doc["builtin_id"] = h.builtin_id;
    else
        doc["source"] = h.source;
    if (h.fitness)
        doc["fitness"] = {{"e1", h.fitness->e1},
                          {"e2", h.fitness->e2},
                          {"per_instance_hv", h.fitness->per_instance_hv},
                          {"iterations", h.fitness->iterations}};
    doc["lineage"] = {{"parents", h.lineage.parents}, {"op", h.lineage.op}, {"generation", h.lineage.generation}};
    return doc;
}

Heuristic heuristic_from_json(const Json& doc) {
    try {
        Heuristic h;
        h.id = doc.at("id").get<std::string>();
        h.description = doc.value("description", "");
        const auto kind = doc.at("kind").get<std::string>();
        if (kind == "builtin") {
            h.kind = BodyKind::builtin;
            h.builtin_id = doc.at("builtin_id").get<std::string>();
        } else if (kind == "external") {
            h.kind = BodyKind::external;
            h.source = doc.at("source").get<std::string>();
        } else {
            throw std::invalid_argument("unknown heuristic kind '" + kind + "'");
        }
        if (doc.contains("fitness")) {
            const auto& f = doc["fitness"];
            h.fitness = FitnessVector{f.at("e1").get<double>(), f.at("e2").get<double>(),
                                      f.value("per_instance_hv", std::vector<double>{}),
                                      f.value("iterations", std::vector<std::uint64_t>{})};
        }
        if (doc.contains("lineage")) {
            const auto& l = doc["lineage"];
            h.lineage.parents = l.value("parents", std::vector<std::string>{});
            h.lineage.op = l.value("op", "init");
            h.lineage.generation = l.value("generation", 0);
        }
        return h;
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("heuristic: ") + e.what());
    }
}

bool heuristic_fitness_dominates(const Heuristic& a, const Heuristic& b) {
    if (!a.fitness || !b.fitness) throw StateError("fitness comparison on an unevaluated heuristic");
    const double fa[] = {a.fitness->e1, a.fitness->e2};
    const double fb[] = {b.fitness->e1, b.fitness->e2};
    return dominates(fa, fb);
}

}  // namespace moco
