#include "moco/worker.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstring>

extern char** environ;

namespace moco::worker {

namespace {

template <class T>
T get(const Json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) throw ProtocolError(std::string("missing field '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ProtocolError(std::string("bad field '") + key + "': " + e.what());
    }
}

void check_version(const Json& doc) {
    if (get<int>(doc, "version") != protocol_version) throw ProtocolError("unsupported protocol version");
}

struct Fd {
    int fd = -1;
    ~Fd() { reset(); }
    void reset() {
        if (fd >= 0) ::close(fd);
        fd = -1;
    }
};

}  // namespace

std::string_view status_tag(Status s) {
    switch (s) {
        case Status::ok: return "ok";
        case Status::code_error: return "code_error";
        case Status::timeout: return "timeout";
        case Status::infeasible_flood: return "infeasible_flood";
    }
    return "ok";
}

Status parse_status(std::string_view tag) {
    for (Status s : {Status::ok, Status::code_error, Status::timeout, Status::infeasible_flood})
        if (status_tag(s) == tag) return s;
    throw ProtocolError("unknown status '" + std::string(tag) + "'");
}

Json job_to_json(const EvalJob& job) {
    Json instances = Json::array();
    for (const auto& i : job.instances) instances.push_back(instance_to_json(i));
    Json budget = Json::object();
    budget["max_iterations"] = job.budget.max_iterations ? Json(*job.budget.max_iterations) : Json(nullptr);
    budget["time_limit_s"] = job.budget.time_limit_s ? Json(*job.budget.time_limit_s) : Json(nullptr);
    return {{"version", protocol_version}, {"problem", std::string(problem_tag(job.problem))},
            {"instances", instances},      {"source", job.source},
            {"budget", budget},            {"seeds", job.seeds}};
}

EvalJob job_from_json(const Json& doc) {
    check_version(doc);
    EvalJob job;
    try {
        job.problem = parse_problem(get<std::string>(doc, "problem"));
        for (const auto& i : doc.at("instances")) {
            job.instances.push_back(instance_from_json(i));
            if (problem_of(job.instances.back()) != job.problem) throw ProtocolError("instance family differs from job");
        }
    } catch (const std::invalid_argument& e) {
        throw ProtocolError(e.what());
    } catch (const Json::exception& e) {
        throw ProtocolError(e.what());
    }
    job.source = get<std::string>(doc, "source");
    const Json& budget = doc.at("budget");
    if (budget.contains("max_iterations") && !budget["max_iterations"].is_null())
        job.budget.max_iterations = get<std::uint64_t>(budget, "max_iterations");
    if (budget.contains("time_limit_s") && !budget["time_limit_s"].is_null())
        job.budget.time_limit_s = get<double>(budget, "time_limit_s");
    try {
        job.budget.validate();
    } catch (const std::invalid_argument& e) {
        throw ProtocolError(e.what());
    }
    job.seeds = get<std::vector<std::uint64_t>>(doc, "seeds");
    if (job.seeds.size() != job.instances.size()) throw ProtocolError("one seed per instance required");
    return job;
}

Json report_to_json(const EvalReport& report, Problem) {
    Json results = Json::array();
    for (const auto& r : report.results) {
        Json archive = Json::array();
        for (const auto& e : r.archive)
            archive.push_back({{"objectives", e.objectives}, {"solution", solution_to_json(e.solution)}});
        results.push_back({{"iterations", r.iterations},
                           {"elapsed_s", r.elapsed_s},
                           {"rejected_infeasible", r.rejected_infeasible},
                           {"archive", archive},
                           {"accepted", r.accepted}});
    }
    return {{"version", protocol_version},
            {"status", std::string(status_tag(report.status))},
            {"diagnostics", report.diagnostics},
            {"results", results}};
}

EvalReport report_from_json(const Json& doc, Problem problem) {
    check_version(doc);
    EvalReport report;
    report.status = parse_status(get<std::string>(doc, "status"));
    if (doc.contains("diagnostics")) report.diagnostics = get<std::string>(doc, "diagnostics");
    if (!doc.contains("results") || !doc["results"].is_array()) throw ProtocolError("missing results array");
    for (const auto& r : doc["results"]) {
        InstanceReport ir;
        ir.iterations = get<std::uint64_t>(r, "iterations");
        ir.elapsed_s = get<double>(r, "elapsed_s");
        if (r.contains("rejected_infeasible")) ir.rejected_infeasible = get<std::uint64_t>(r, "rejected_infeasible");
        if (r.contains("accepted")) ir.accepted = get<std::vector<ObjectiveVector>>(r, "accepted");
        if (!r.contains("archive") || !r["archive"].is_array()) throw ProtocolError("missing archive array");
        for (const auto& e : r["archive"]) {
            try {
                ir.archive.push_back({solution_from_json(e.at("solution"), problem), get<ObjectiveVector>(e, "objectives")});
            } catch (const std::invalid_argument& err) {
                throw ProtocolError(err.what());
            } catch (const Json::exception& err) {
                throw ProtocolError(err.what());
            }
        }
        report.results.push_back(std::move(ir));
    }
    return report;
}

EvalReport run_worker(const std::vector<std::string>& command, const EvalJob& job, double timeout_s) {
    if (command.empty()) throw WorkerError("no worker command configured");
    const std::string request = job_to_json(job).dump();

    int in_pipe[2], out_pipe[2], err_pipe[2];
    if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0)
        throw WorkerError(std::string("pipe: ") + std::strerror(errno));
    Fd child_in{in_pipe[0]}, to_child{in_pipe[1]}, from_child{out_pipe[0]}, child_out{out_pipe[1]},
        err_child{err_pipe[0]}, child_err{err_pipe[1]};

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, child_in.fd, 0);
    posix_spawn_file_actions_adddup2(&actions, child_out.fd, 1);
    posix_spawn_file_actions_adddup2(&actions, child_err.fd, 2);
    for (int fd : {to_child.fd, from_child.fd, err_child.fd, child_in.fd, child_out.fd, child_err.fd})
        posix_spawn_file_actions_addclose(&actions, fd);

    std::vector<char*> argv;
    for (const auto& a : command) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    pid_t pid = -1;
    int rc = ::posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) throw WorkerError("cannot start worker '" + command[0] + "': " + std::strerror(rc));
    child_in.reset();
    child_out.reset();
    child_err.reset();

    ::fcntl(to_child.fd, F_SETFL, O_NONBLOCK);
    ::signal(SIGPIPE, SIG_IGN);

    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::duration<double>(timeout_s);
    std::string out, err;
    std::size_t written = 0;
    bool timed_out = false;
    char buf[65536];
    while (from_child.fd >= 0 || err_child.fd >= 0) {
        auto left = std::chrono::duration<double>(deadline - clock::now()).count();
        if (left <= 0) {
            timed_out = true;
            break;
        }
        std::vector<pollfd> fds;
        if (to_child.fd >= 0) fds.push_back({to_child.fd, POLLOUT, 0});
        if (from_child.fd >= 0) fds.push_back({from_child.fd, POLLIN, 0});
        if (err_child.fd >= 0) fds.push_back({err_child.fd, POLLIN, 0});
        int ready = ::poll(fds.data(), fds.size(), static_cast<int>(std::ceil(left * 1000)));
        if (ready < 0 && errno != EINTR) break;
        for (const auto& p : fds) {
            if (!p.revents) continue;
            if (p.fd == to_child.fd) {
                ssize_t w = ::write(to_child.fd, request.data() + written, request.size() - written);
                if (w > 0) written += static_cast<std::size_t>(w);
                if (w < 0 && errno != EAGAIN) written = request.size();
                if (written >= request.size()) to_child.reset();
            } else {
                ssize_t r = ::read(p.fd, buf, sizeof buf);
                if (r > 0) {
                    (p.fd == from_child.fd ? out : err).append(buf, static_cast<std::size_t>(r));
                } else if (r == 0 || errno != EAGAIN) {
                    if (p.fd == from_child.fd)
                        from_child.reset();
                    else
                        err_child.reset();
                }
            }
        }
    }
    if (timed_out) ::kill(pid, SIGKILL);
    int wstatus = 0;
    ::waitpid(pid, &wstatus, 0);
    if (err.size() > 2000) err = err.substr(err.size() - 2000);
    if (timed_out) throw WorkerError("worker exceeded " + std::to_string(timeout_s) + " s and was killed");
    if (!WIFEXITED(wstatus)) throw WorkerError("worker terminated abnormally: " + err);
    const int code = WEXITSTATUS(wstatus);
    if (code == 2) throw WorkerError("worker reported a protocol violation: " + err);
    if (code != 0) throw WorkerError("worker exited with code " + std::to_string(code) + ": " + err);
    try {
        return report_from_json(Json::parse(out), job.problem);
    } catch (const Json::parse_error& e) {
        throw WorkerError(std::string("unparseable report: ") + e.what());
    } catch (const ProtocolError& e) {
        throw WorkerError(std::string("invalid report: ") + e.what());
    }
}

std::optional<std::string> verify_report(const EvalReport& report, const EvalJob& job) {
    if (report.status != Status::ok) return std::nullopt;
    if (report.results.size() != job.instances.size()) return "report has " + std::to_string(report.results.size()) +
                                                              " archives for " +
                                                              std::to_string(job.instances.size()) + " instances";
    for (std::size_t i = 0; i < job.instances.size(); ++i) {
        const auto& res = report.results[i];
        const std::string where = "instance " + std::to_string(i) + ": ";
        if (res.archive.empty()) return where + "empty archive";
        ProblemContext ctx(job.instances[i]);
        std::vector<ObjectiveVector> objs;
        for (const auto& e : res.archive) {
            if (auto v = validate_solution(e.solution, job.instances[i])) return where + "infeasible solution: " + *v;
            auto f = ctx.evaluate(e.solution);
            if (f.size() != e.objectives.size()) return where + "objective count mismatch";
            for (std::size_t k = 0; k < f.size(); ++k)
                if (std::abs(f[k] - e.objectives[k]) > 1e-6 * std::max(1.0, std::abs(f[k])))
                    return where + "reported objectives differ from recomputation";
            objs.push_back(std::move(f));
        }
        if (!mutually_nondominated(objs)) return where + "archive is not mutually non-dominated";
    }
    return std::nullopt;
}

}  // namespace moco::worker
