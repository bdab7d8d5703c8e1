#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "moco/heuristics.hpp"
#include "moco/llm.hpp"

namespace moco::llm {

/// Model names and sampling temperature. The generator writes heuristics;
/// the assessor clusters and reflects.
struct ModelRoles {
    std::string generator = "gpt-4o-mini";
    std::string assessor = "gpt-4o";
    double temperature = 0.7;
};

std::string_view system_prompt();
std::string_view task_description(Problem problem);
std::string_view template_program(Problem problem);

ChatRequest build_init_prompt(Problem problem, const ModelRoles& roles = {});

/// Snippets are enumerated from 0. Throws std::invalid_argument for fewer than two.
ChatRequest build_cluster_prompt(std::span<const std::string> snippets, const ModelRoles& roles = {});

/// One to four parents. Throws std::invalid_argument otherwise.
ChatRequest build_reflection_prompt(Problem problem, std::span<const Heuristic> parents, const ModelRoles& roles = {});

enum class Operator { e1, e2, m1, m2 };

std::string_view operator_tag(Operator op);
Purpose purpose_of(Operator op);

/// E1/E2 take two or more parents and optional suggestions; M1/M2 take exactly
/// one parent and no suggestions. Throws std::invalid_argument otherwise.
ChatRequest build_variation_prompt(Problem problem, Operator op, std::span<const Heuristic> parents,
                                   const std::optional<std::string>& suggestions, const ModelRoles& roles = {});

class ParseError : public std::runtime_error {
public:
    enum class Part { description, code, suggestions };
    ParseError(Part part, const std::string& what) : std::runtime_error(what), part_(part) {}
    Part part() const { return part_; }

private:
    Part part_;
};

struct ParsedHeuristic {
    std::string description;
    std::string source;
};

/// Description: the first non-empty innermost {...} span outside code fences
/// (anywhere, as a fallback). Source: the first fenced block, else everything
/// from the first "def " line on.
ParsedHeuristic parse_heuristic_response(std::string_view text);

class ClusterParseError : public std::runtime_error {
public:
    enum class Kind { json, range, overlap, cover };
    ClusterParseError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Partition of {0..pool_size-1} from the first JSON object in `text`,
/// clusters ordered by key (numerically when keys are integers).
std::vector<std::vector<int>> parse_cluster_response(std::string_view text, std::size_t pool_size);

/// Text after "Suggestions:" up to the closing "---" line (or the end).
std::string parse_suggestions(std::string_view text);

}  // namespace moco::llm
