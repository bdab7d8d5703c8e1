#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "moco/io.hpp"
#include "moco/semo.hpp"

namespace moco::worker {

inline constexpr int protocol_version = 1;

/// One evaluation request. Objective values in reports use the canonical
/// minimization orientation (knapsack profits negated).
struct EvalJob {
    Problem problem = Problem::bi_tsp;
    std::vector<Instance> instances;
    std::string source;
    SemoBudget budget;
    /// One SEMO seed per instance.
    std::vector<std::uint64_t> seeds;
};

enum class Status { ok, code_error, timeout, infeasible_flood };

std::string_view status_tag(Status s);
Status parse_status(std::string_view tag);

struct InstanceReport {
    std::vector<ArchiveEntry> archive;
    std::uint64_t iterations = 0;
    double elapsed_s = 0.0;
    std::uint64_t rejected_infeasible = 0;
    /// Objective vectors of accepted candidates in acceptance order (optional).
    std::vector<ObjectiveVector> accepted;
};

struct EvalReport {
    Status status = Status::ok;
    std::string diagnostics;
    std::vector<InstanceReport> results;
};

/// Malformed protocol document.
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The worker process could not produce a report (spawn failure, crash,
/// protocol violation, or host-side timeout).
class WorkerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json job_to_json(const EvalJob& job);
EvalJob job_from_json(const Json& doc);
Json report_to_json(const EvalReport& report, Problem problem);
EvalReport report_from_json(const Json& doc, Problem problem);

/// Spawns `command`, writes the job to its stdin and reads the report from
/// stdout. The process is killed after `timeout_s` seconds.
EvalReport run_worker(const std::vector<std::string>& command, const EvalJob& job, double timeout_s);

/// Checks an ok report against the job: one archive per instance, feasible
/// solutions, objectives matching recomputation, mutual non-dominance.
/// Returns the first problem found.
std::optional<std::string> verify_report(const EvalReport& report, const EvalJob& job);

}  // namespace moco::worker
