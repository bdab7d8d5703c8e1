#include "moco/llm.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>

namespace moco::llm {

std::string_view purpose_tag(Purpose p) {
    switch (p) {
        case Purpose::init: return "init";
        case Purpose::cluster: return "cluster";
        case Purpose::reflect: return "reflect";
        case Purpose::e1: return "e1";
        case Purpose::e2: return "e2";
        case Purpose::m1: return "m1";
        case Purpose::m2: return "m2";
    }
    return "init";
}

Purpose parse_purpose(std::string_view tag) {
    for (Purpose p : {Purpose::init, Purpose::cluster, Purpose::reflect, Purpose::e1, Purpose::e2, Purpose::m1,
                      Purpose::m2})
        if (purpose_tag(p) == tag) return p;
    throw std::invalid_argument("unknown purpose tag '" + std::string(tag) + "'");
}

void ChatRequest::validate() const {
    if (messages.empty()) throw std::invalid_argument("chat request without messages");
    if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be non-negative");
}

Json request_to_json(const ChatRequest& request) {
    Json messages = Json::array();
    for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
    return {{"model", request.model}, {"temperature", request.temperature}, {"messages", messages}};
}

ChatRequest request_from_json(const Json& doc, Purpose purpose) {
    ChatRequest r;
    r.model = doc.at("model").get<std::string>();
    r.temperature = doc.at("temperature").get<double>();
    for (const auto& m : doc.at("messages"))
        r.messages.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
    r.purpose = purpose;
    return r;
}

std::string sha256_hex(std::string_view wire) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(wire.data(), wire.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

std::string request_digest(const ChatRequest& request) { return sha256_hex(request_to_json(request).dump()); }

MockBackend::MockBackend(std::map<Purpose, std::vector<std::string>> table) : table_(std::move(table)) {}

std::string MockBackend::complete(const ChatRequest& request) {
    request.validate();
    const std::string digest = request_digest(request);
    std::lock_guard lock(mutex_);
    ++calls_;
    auto it = table_.find(request.purpose);
    if (it == table_.end() || it->second.empty())
        throw TransportError("mock backend has no response for purpose " + std::string(purpose_tag(request.purpose)));
    const auto& options = it->second;
    const std::uint64_t h = std::stoull(digest.substr(0, 15), nullptr, 16);
    const std::size_t k = seen_[digest]++;
    return options[(h + k) % options.size()];
}

std::size_t MockBackend::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

std::map<Purpose, std::vector<std::string>> mock_table_from_json(const Json& doc) {
    std::map<Purpose, std::vector<std::string>> table;
    for (const auto& [key, value] : doc.items()) table[parse_purpose(key)] = value.get<std::vector<std::string>>();
    return table;
}

namespace {

Json record_to_json(const TranscriptRecord& r) {
    return {{"digest", r.digest},
            {"purpose", std::string(purpose_tag(r.purpose))},
            {"request", r.request},
            {"response", r.response},
            {"timestamp", r.timestamp}};
}

}  // namespace

Transcript::Transcript(std::filesystem::path path) : path_(std::move(path)) {
    if (path_->has_parent_path()) std::filesystem::create_directories(path_->parent_path());
    std::ofstream(*path_, std::ios::trunc);
}

Transcript Transcript::load(const std::filesystem::path& path) {
    Transcript t;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read transcript " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            Json doc = Json::parse(line);
            TranscriptRecord r;
            r.digest = doc.at("digest").get<std::string>();
            r.purpose = parse_purpose(doc.at("purpose").get<std::string>());
            r.request = doc.at("request");
            r.response = doc.at("response").get<std::string>();
            r.timestamp = doc.value("timestamp", 0.0);
            t.records_.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return t;
}

void Transcript::append(TranscriptRecord record) {
    std::lock_guard lock(mutex_);
    if (path_) {
        std::ofstream out(*path_, std::ios::app);
        out << record_to_json(record).dump() << '\n';
    }
    records_.push_back(std::move(record));
}

std::vector<TranscriptRecord> Transcript::records() const {
    std::lock_guard lock(mutex_);
    return records_;
}

std::size_t Transcript::size() const {
    std::lock_guard lock(mutex_);
    return records_.size();
}

ReplayBackend::ReplayBackend(const Transcript& transcript) {
    for (const auto& r : transcript.records()) entries_[r.digest].push_back({r.request, r.response});
}

std::string ReplayBackend::complete(const ChatRequest& request) {
    request.validate();
    const std::string digest = request_digest(request);
    std::lock_guard lock(mutex_);
    auto it = entries_.find(digest);
    if (it == entries_.end()) throw ReplayMiss(request.purpose, digest);
    std::size_t& k = next_[digest];
    if (k >= it->second.size()) throw ReplayMiss(request.purpose, digest);
    const Entry& e = it->second[k++];
    if (e.request != request_to_json(request))
        throw std::runtime_error("transcript digest collision on " + digest.substr(0, 12));
    return e.response;
}

LiveBackend::LiveBackend(LiveConfig config) : config_(std::move(config)) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key || !*key) throw std::invalid_argument("environment variable " + config_.api_key_env + " is not set");
    key_ = key;
}

std::string LiveBackend::complete(const ChatRequest& request) {
    request.validate();
    const std::string body = request_to_json(request).dump();
    std::string last_error;
    double wait = config_.backoff_s;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        httplib::Client client(config_.base_url);
        const auto secs = static_cast<time_t>(config_.timeout_s);
        client.set_connection_timeout(secs);
        client.set_read_timeout(secs);
        client.set_write_timeout(secs);
        httplib::Headers headers = {{"Authorization", "Bearer " + key_}};
        auto res = client.Post(config_.path, headers, body, "application/json");
        if (!res) {
            last_error = "transport: " + httplib::to_string(res.error());
        } else if (res->status == 200) {
            try {
                Json doc = Json::parse(res->body);
                return doc.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const std::exception& e) {
                throw TransportError(std::string("unexpected completion payload: ") + e.what());
            }
        } else if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
        } else {
            throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 500));
        }
        if (attempt < config_.max_attempts) {
            std::this_thread::sleep_for(std::chrono::duration<double>(wait));
            wait *= 2;
        }
    }
    throw TransportError("completion failed after " + std::to_string(config_.max_attempts) + " attempts: " + last_error);
}

std::string RecordingBackend::complete(const ChatRequest& request) {
    std::string response = inner_.complete(request);
    TranscriptRecord r;
    r.digest = request_digest(request);
    r.purpose = request.purpose;
    r.request = request_to_json(request);
    r.response = response;
    if (inner_.live())
        r.timestamp = std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
    transcript_.append(std::move(r));
    return response;
}

}  // namespace moco::llm
