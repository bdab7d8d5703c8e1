#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "moco/io.hpp"

namespace moco::llm {

enum class Purpose { init, cluster, reflect, e1, e2, m1, m2 };

std::string_view purpose_tag(Purpose p);
Purpose parse_purpose(std::string_view tag);

struct Message {
    std::string role;
    std::string content;
};

struct ChatRequest {
    std::vector<Message> messages;
    double temperature = 0.7;
    std::string model;
    /// Bookkeeping only; not part of the digest or the wire format.
    Purpose purpose = Purpose::init;

    /// Throws std::invalid_argument for empty messages or negative temperature.
    void validate() const;
};

/// {"model", "temperature", "messages": [{"role", "content"}]}
Json request_to_json(const ChatRequest& request);
ChatRequest request_from_json(const Json& doc, Purpose purpose);

std::string sha256_hex(std::string_view data);

/// Hex SHA-256 of the compact wire JSON.
std::string request_digest(const ChatRequest& request);

class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ReplayMiss : public std::runtime_error {
public:
    ReplayMiss(Purpose purpose, const std::string& digest)
        : std::runtime_error("no recorded response for " + std::string(purpose_tag(purpose)) + " request " +
                             digest.substr(0, 12)),
          purpose_(purpose) {}
    Purpose purpose() const { return purpose_; }

private:
    Purpose purpose_;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
    virtual bool live() const { return false; }
};

/// Canned responses per purpose. Which entry answers a request depends only on
/// the request digest and how often that digest was seen before.
class MockBackend : public Backend {
public:
    explicit MockBackend(std::map<Purpose, std::vector<std::string>> table);
    std::string complete(const ChatRequest& request) override;
    std::size_t calls() const;

private:
    std::map<Purpose, std::vector<std::string>> table_;
    std::map<std::string, std::size_t> seen_;
    std::size_t calls_ = 0;
    mutable std::mutex mutex_;
};

/// Loads {"init": [...], "cluster": [...], ...} from JSON.
std::map<Purpose, std::vector<std::string>> mock_table_from_json(const Json& doc);

struct TranscriptRecord {
    std::string digest;
    Purpose purpose = Purpose::init;
    Json request;
    std::string response;
    double timestamp = 0.0;
};

/// Append-only call log, one JSON document per line on disk.
class Transcript {
public:
    Transcript() = default;
    /// Records are appended to `path` as they arrive.
    explicit Transcript(std::filesystem::path path);
    Transcript(Transcript&& other) noexcept : records_(std::move(other.records_)), path_(std::move(other.path_)) {}

    static Transcript load(const std::filesystem::path& path);

    void append(TranscriptRecord record);
    std::vector<TranscriptRecord> records() const;
    std::size_t size() const;

private:
    std::vector<TranscriptRecord> records_;
    std::optional<std::filesystem::path> path_;
    mutable std::mutex mutex_;
};

/// Serves recorded responses in recording order per digest.
class ReplayBackend : public Backend {
public:
    explicit ReplayBackend(const Transcript& transcript);
    std::string complete(const ChatRequest& request) override;

private:
    struct Entry {
        Json request;
        std::string response;
    };
    std::map<std::string, std::vector<Entry>> entries_;
    std::map<std::string, std::size_t> next_;
    std::mutex mutex_;
};

struct LiveConfig {
    /// Scheme, host and optional port, e.g. "https://api.openai.com".
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    std::string api_key_env = "LLM_API_KEY";
    int max_attempts = 3;
    double backoff_s = 2.0;
    double timeout_s = 120.0;
};

/// OpenAI-style chat completion endpoint over HTTP(S).
class LiveBackend : public Backend {
public:
    /// Throws std::invalid_argument when the key variable is unset.
    explicit LiveBackend(LiveConfig config);
    std::string complete(const ChatRequest& request) override;
    bool live() const override { return true; }

private:
    LiveConfig config_;
    std::string key_;
};

/// Forwards to `inner` and logs every exchange to `transcript`. Timestamps are
/// wall-clock seconds for live backends and 0 otherwise.
class RecordingBackend : public Backend {
public:
    RecordingBackend(Backend& inner, Transcript& transcript) : inner_(inner), transcript_(transcript) {}
    std::string complete(const ChatRequest& request) override;
    bool live() const override { return inner_.live(); }

private:
    Backend& inner_;
    Transcript& transcript_;
};

}  // namespace moco::llm
