#include <doctest.h>

#include <chrono>

#include "moco/heuristics.hpp"
#include "moco/worker.hpp"

using namespace moco;
using namespace moco::worker;

namespace {

std::vector<std::string> fake(const std::string& mode) { return {MOCO_FAKE_WORKER, mode}; }

EvalJob tsp_job(std::size_t count = 2) {
    EvalJob job;
    job.problem = Problem::bi_tsp;
    job.source = std::string(find_builtin("bitsp_weighted_reverse")->source);
    job.budget.max_iterations = 500;
    job.budget.time_limit_s = 10.0;
    for (std::size_t i = 0; i < count; ++i) {
        job.instances.push_back(generate_instance(Problem::bi_tsp, 20, i));
        job.seeds.push_back(100 + i);
    }
    return job;
}

}  // namespace

TEST_SUITE("worker") {

TEST_CASE("job json round trip and version check") {
    auto job = tsp_job();
    auto doc = job_to_json(job);
    CHECK(doc["version"] == 1);
    auto back = job_from_json(doc);
    CHECK(job_to_json(back) == doc);
    doc["version"] = 2;
    CHECK_THROWS_AS(job_from_json(doc), ProtocolError);
    auto missing = job_to_json(job);
    missing.erase("seeds");
    CHECK_THROWS_AS(job_from_json(missing), ProtocolError);
}

TEST_CASE("status tags") {
    for (auto s : {Status::ok, Status::code_error, Status::timeout, Status::infeasible_flood})
        CHECK(parse_status(status_tag(s)) == s);
    CHECK_THROWS_AS(parse_status("fine"), ProtocolError);
}

TEST_CASE("ok report is verified") {
    auto job = tsp_job();
    auto report = run_worker(fake("ok"), job, 20.0);
    CHECK(report.status == Status::ok);
    REQUIRE(report.results.size() == 2);
    CHECK_FALSE(verify_report(report, job).has_value());
    auto doc = report_to_json(report, job.problem);
    CHECK(doc["version"] == 1);
    CHECK(report_to_json(report_from_json(doc, job.problem), job.problem) == doc);
}

TEST_CASE("non-ok statuses pass through") {
    auto job = tsp_job(1);
    CHECK(run_worker(fake("code_error"), job, 20.0).status == Status::code_error);
    CHECK(run_worker(fake("flood"), job, 20.0).status == Status::infeasible_flood);
}

TEST_CASE("protocol violations and crashes") {
    auto job = tsp_job(1);
    CHECK_THROWS_AS(run_worker(fake("garbage"), job, 20.0), WorkerError);
    CHECK_THROWS_AS(run_worker(fake("version"), job, 20.0), WorkerError);
    CHECK_THROWS_AS(run_worker(fake("crash"), job, 20.0), WorkerError);
    CHECK_THROWS_AS(run_worker({"/nonexistent/worker"}, job, 5.0), WorkerError);
}

TEST_CASE("host-side timeout kills the worker") {
    auto job = tsp_job(1);
    auto start = std::chrono::steady_clock::now();
    CHECK_THROWS_AS(run_worker(fake("sleep"), job, 1.0), WorkerError);
    double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(took < 2.0);
}

TEST_CASE("infeasible solutions fail verification") {
    auto job = tsp_job(1);
    auto report = run_worker(fake("bad"), job, 20.0);
    auto problem = verify_report(report, job);
    REQUIRE(problem.has_value());
}

TEST_CASE("evaluation through the worker") {
    EvaluationSetup setup;
    for (std::size_t i = 0; i < 2; ++i) setup.instances.emplace_back(generate_instance(Problem::bi_tsp, 20, i));
    setup.budget.max_iterations = 300;
    setup.budget.time_limit_s = 10.0;
    Heuristic h;
    h.kind = BodyKind::external;
    // Differs from the catalog text, so it is not run natively.
    h.source = "def select_neighbor(archive, instance, distance_matrix_1, distance_matrix_2):\n    pass\n";
    setup.worker_command = fake("code_error");
    try {
        evaluate_heuristic(h, setup);
        FAIL("expected failure");
    } catch (const EvaluationFailed& e) {
        CHECK(std::string(e.what()) == "code_error");
    }
    setup.worker_command = fake("flood");
    CHECK_THROWS_AS(evaluate_heuristic(h, setup), EvaluationFailed);
    setup.worker_command = fake("garbage");
    CHECK_THROWS_AS(evaluate_heuristic(h, setup), EvaluationFailed);
}

TEST_CASE("worker-routed evaluation agrees with the native run") {
    EvaluationSetup setup;
    for (std::size_t i = 0; i < 3; ++i) setup.instances.emplace_back(generate_instance(Problem::bi_tsp, 20, i));
    setup.budget.max_iterations = 400;
    setup.seed = 5;
    setup.worker_command = fake("ok");
    const auto* info = find_builtin("bitsp_weighted_reverse");
    Heuristic routed;
    routed.kind = BodyKind::external;
    routed.source = "# routed through the worker\n" + std::string(info->source);
    REQUIRE(match_builtin_source(routed.source) == nullptr);
    auto via_worker = evaluate_heuristic(routed, setup);
    auto native = evaluate_heuristic(make_builtin_heuristic(*info, "n"), setup);
    CHECK(via_worker.per_instance_hv == native.per_instance_hv);
    CHECK(via_worker.e1 == native.e1);
}

}
