#include <doctest.h>

#include <filesystem>

#include "moco/prompts.hpp"

using namespace moco;
using namespace moco::llm;

namespace {

std::string prompt_text(const ChatRequest& r) {
    std::string s;
    for (const auto& m : r.messages) s += m.content + "\n";
    return s;
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

Heuristic external(const std::string& id, const std::string& src) {
    Heuristic h;
    h.id = id;
    h.description = "desc " + id;
    h.kind = BodyKind::external;
    h.source = src;
    return h;
}

std::filesystem::path temp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "moco_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("llm") {

TEST_CASE("request validation and digest") {
    ChatRequest r;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    r.messages = {{"user", "hi"}};
    r.model = "m";
    CHECK_NOTHROW(r.validate());
    r.temperature = -1;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    r.temperature = 0.7;
    auto d = request_digest(r);
    CHECK(d.size() == 64);
    ChatRequest other = r;
    other.purpose = Purpose::cluster;
    CHECK(request_digest(other) == d);
    other.messages[0].content = "hi!";
    CHECK(request_digest(other) != d);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("mock backend returns canned text verbatim") {
    MockBackend mock({{Purpose::cluster, {"{\"1\": [0, 1]}"}}});
    auto req = build_cluster_prompt(std::vector<std::string>{"a", "b"});
    CHECK(mock.complete(req) == "{\"1\": [0, 1]}");
    CHECK(mock.calls() == 1);
    ChatRequest init = build_init_prompt(Problem::bi_tsp);
    CHECK_THROWS(mock.complete(init));
}

TEST_CASE("record then replay") {
    auto path = temp_path("transcript.jsonl");
    MockBackend mock({{Purpose::init, {"one", "two", "three"}}});
    {
        Transcript t(path);
        RecordingBackend rec(mock, t);
        auto req = build_init_prompt(Problem::bi_kp);
        for (int i = 0; i < 3; ++i) rec.complete(req);
        CHECK(t.size() == 3);
    }
    auto loaded = Transcript::load(path);
    REQUIRE(loaded.size() == 3);
    MockBackend again({{Purpose::init, {"one", "two", "three"}}});
    ReplayBackend replay(loaded);
    auto req = build_init_prompt(Problem::bi_kp);
    for (int i = 0; i < 3; ++i) CHECK(replay.complete(req) == again.complete(req));
    try {
        replay.complete(req);
        FAIL("expected a replay miss");
    } catch (const ReplayMiss& e) {
        CHECK(e.purpose() == Purpose::init);
        CHECK(contains(e.what(), "init"));
    }
    try {
        replay.complete(build_cluster_prompt(std::vector<std::string>{"x", "y"}));
        FAIL("expected a replay miss");
    } catch (const ReplayMiss& e) {
        CHECK(contains(e.what(), "cluster"));
    }
}

TEST_CASE("live backend requires a key") {
    LiveConfig c;
    c.api_key_env = "MOCO_TEST_UNSET_KEY_VARIABLE";
    CHECK_THROWS_AS(LiveBackend{c}, std::invalid_argument);
}

TEST_CASE("live backend retries and surfaces transport errors") {
    ::setenv("MOCO_TEST_KEY", "k", 1);
    LiveConfig c;
    c.api_key_env = "MOCO_TEST_KEY";
    c.base_url = "http://127.0.0.1:9";
    c.max_attempts = 2;
    c.backoff_s = 0.01;
    c.timeout_s = 1;
    LiveBackend live(c);
    CHECK(live.live());
    CHECK_THROWS_AS(live.complete(build_init_prompt(Problem::bi_tsp)), TransportError);
}

}

TEST_SUITE("prompts") {

TEST_CASE("init prompts") {
    auto tsp = prompt_text(build_init_prompt(Problem::bi_tsp));
    for (auto s : {"select_neighbor", "archive", "instance", "distance_matrix_1", "distance_matrix_2"})
        CHECK(contains(tsp, s));
    CHECK(contains(prompt_text(build_init_prompt(Problem::bi_kp)), "remains feasible"));
    auto r = build_init_prompt(Problem::bi_cvrp);
    CHECK(r.purpose == Purpose::init);
    CHECK(r.model == ModelRoles{}.generator);
}

TEST_CASE("cluster prompt") {
    std::vector<std::string> s{"a = 1", "b = 2", "c = 3"};
    auto r = build_cluster_prompt(s);
    auto text = prompt_text(r);
    CHECK(contains(text, "I have 3 code snippets"));
    CHECK(contains(text, "\"1\": [0, 2, 4]"));
    CHECK(r.model == ModelRoles{}.assessor);
    std::vector<std::string> one{"x"};
    CHECK_THROWS_AS(build_cluster_prompt(one), std::invalid_argument);
}

TEST_CASE("reflection prompt") {
    std::vector<Heuristic> ps{external("a", "def a(): pass"), external("b", "def b(): pass")};
    auto text = prompt_text(build_reflection_prompt(Problem::bi_tsp, ps));
    CHECK(contains(text, "def a(): pass"));
    CHECK(contains(text, "def b(): pass"));
    CHECK(contains(text, "---\nSuggestions:"));
    std::vector<Heuristic> one{ps[0]};
    CHECK_NOTHROW(build_reflection_prompt(Problem::bi_tsp, one));
    std::vector<Heuristic> none;
    CHECK_THROWS_AS(build_reflection_prompt(Problem::bi_tsp, none), std::invalid_argument);
}

TEST_CASE("variation prompts") {
    std::vector<Heuristic> two{external("a", "def a(): pass"), external("b", "def b(): pass")};
    std::vector<Heuristic> one{two[0]};
    auto e1 = build_variation_prompt(Problem::bi_tsp, Operator::e1, two, std::string("try 2-opt"));
    CHECK(contains(prompt_text(e1), "most different from each other"));
    CHECK(contains(prompt_text(e1), "try 2-opt"));
    CHECK(e1.purpose == Purpose::e1);
    auto e2 = build_variation_prompt(Problem::bi_tsp, Operator::e2, two, std::nullopt);
    CHECK(contains(prompt_text(e2), "identify the common backbone idea"));
    CHECK_FALSE(contains(prompt_text(e2), "Suggestions:"));
    auto m2 = build_variation_prompt(Problem::bi_kp, Operator::m2, one, std::nullopt);
    CHECK(contains(prompt_text(m2), "identify the main algorithm parameters"));
    CHECK(m2.purpose == Purpose::m2);
    CHECK_THROWS_AS(build_variation_prompt(Problem::bi_kp, Operator::m1, one, std::string("x")), std::invalid_argument);
    CHECK_THROWS_AS(build_variation_prompt(Problem::bi_kp, Operator::m1, two, std::nullopt), std::invalid_argument);
    CHECK_THROWS_AS(build_variation_prompt(Problem::bi_kp, Operator::e1, one, std::nullopt), std::invalid_argument);
}

TEST_CASE("heuristic response parsing") {
    auto p = parse_heuristic_response("{{greedy swap}}\n```\ndef select_neighbor(a, b): return a\n```");
    CHECK(p.description == "greedy swap");
    CHECK(p.source == "def select_neighbor(a, b): return a");
    auto q = parse_heuristic_response("{pick the best}\nimport numpy as np\ndef select_neighbor(x):\n    return x\n");
    CHECK(q.description == "pick the best");
    CHECK(contains(q.source, "def select_neighbor(x):"));
    CHECK_FALSE(contains(q.source, "pick the best"));
    try {
        parse_heuristic_response("{just words} and nothing else");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.part() == ParseError::Part::code);
    }
    try {
        parse_heuristic_response("```python\ndef f(): pass\n```");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.part() == ParseError::Part::description);
    }
}

TEST_CASE("cluster response parsing") {
    const std::string example = "For example:\n{\n  \"1\": [0, 2, 4],\n  \"2\": [1, 3],\n  \"3\": [5]\n}\n";
    CHECK(parse_cluster_response(example, 6) == std::vector<std::vector<int>>{{0, 2, 4}, {1, 3}, {5}});
    CHECK(parse_cluster_response("{\"10\": [2], \"2\": [0, 1]}", 3) == std::vector<std::vector<int>>{{0, 1}, {2}});
    auto kind_of = [](const std::string& text, std::size_t n) {
        try {
            parse_cluster_response(text, n);
        } catch (const ClusterParseError& e) {
            return static_cast<int>(e.kind());
        }
        return -1;
    };
    CHECK(kind_of("{\"1\": [0, 2, 4], \"2\": [1, 3]}", 6) == static_cast<int>(ClusterParseError::Kind::cover));
    CHECK(kind_of("{\"1\": [0, 1], \"2\": [1]}", 2) == static_cast<int>(ClusterParseError::Kind::overlap));
    CHECK(kind_of("{\"1\": [0, 7]}", 2) == static_cast<int>(ClusterParseError::Kind::range));
    CHECK(kind_of("no json here", 2) == static_cast<int>(ClusterParseError::Kind::json));
}

TEST_CASE("suggestion parsing") {
    CHECK(parse_suggestions("---\nSuggestions:\nUse 2-opt moves.\n---\n") == "Use 2-opt moves.");
    CHECK_THROWS_AS(parse_suggestions("---\nSuggestions:\n\n---"), ParseError);
}

}
