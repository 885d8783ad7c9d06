#include "attreval/client.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "attreval/errors.hpp"
#include "attreval/jsonl.hpp"
#include "attreval/rng.hpp"

namespace attreval {

void MockClient::add_response(std::string_view prompt, std::string response) {
    responses_[fnv1a64(prompt)] = std::move(response);
}

void MockClient::set_default_response(std::string response) {
    default_response_ = std::move(response);
}

void MockClient::set_handler(std::function<std::string(const GenerationRequest&)> handler) {
    handler_ = std::move(handler);
}

std::string MockClient::complete(const GenerationRequest& request) {
    {
        std::lock_guard lock(mutex_);
        ++calls_;
    }
    auto it = responses_.find(fnv1a64(request.prompt));
    if (it != responses_.end()) return it->second;
    if (handler_) return handler_(request);
    if (default_response_) return *default_response_;
    throw ClientError("mock: no canned response for prompt");
}

int MockClient::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

namespace {

class HashClient : public GenerationClient {
  public:
    HashClient(std::string prefix, std::string model_id)
        : prefix_(std::move(prefix)), model_id_(std::move(model_id)) {}

    std::string complete(const GenerationRequest& request) override {
        char hex[9];
        std::snprintf(hex, sizeof(hex), "%08x",
                      static_cast<unsigned>(fnv1a64(request.prompt) & 0xFFFFFFFFu));
        return prefix_ + hex;
    }

    std::string model_id() const override { return model_id_; }

  private:
    std::string prefix_;
    std::string model_id_;
};

/// Paces calls so no two start closer together than the per-minute budget allows.
class RateLimiter {
  public:
    explicit RateLimiter(int requests_per_minute) {
        if (requests_per_minute > 0) {
            interval_ = std::chrono::nanoseconds(std::chrono::minutes(1)) / requests_per_minute;
        }
    }

    void acquire() {
        if (interval_.count() == 0) return;
        std::chrono::steady_clock::time_point wake;
        {
            std::lock_guard lock(mutex_);
            auto now = std::chrono::steady_clock::now();
            wake = next_ < now ? now : next_;
            next_ = wake + interval_;
        }
        std::this_thread::sleep_until(wake);
    }

  private:
    std::chrono::nanoseconds interval_{0};
    std::chrono::steady_clock::time_point next_{};
    std::mutex mutex_;
};

struct ParsedUrl {
    std::string origin;  // scheme://host[:port], what httplib::Client wants
    std::string path;    // base path with no trailing slash
};

ParsedUrl split_base_url(const std::string& base_url) {
    auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error("endpoint base_url must start with http:// or https://");
    }
    auto path_start = base_url.find('/', scheme_end + 3);
    ParsedUrl parsed;
    if (path_start == std::string::npos) {
        parsed.origin = base_url;
    } else {
        parsed.origin = base_url.substr(0, path_start);
        parsed.path = base_url.substr(path_start);
    }
    while (!parsed.path.empty() && parsed.path.back() == '/') parsed.path.pop_back();
    return parsed;
}

class HttpEndpointClient : public GenerationClient {
  public:
    explicit HttpEndpointClient(const EndpointConfig& config)
        : config_(config), url_(split_base_url(config.base_url)), limiter_(config.requests_per_minute) {
        if (!config.credential_env.empty()) {
            const char* value = std::getenv(config.credential_env.c_str());
            if (value == nullptr || *value == '\0') {
                throw AuthError("credential variable " + config.credential_env + " is not set");
            }
            api_key_ = value;
        }
    }

    std::string complete(const GenerationRequest& request) override {
        nlohmann::json body{
            {"model", config_.model_id},
            {"messages", nlohmann::json::array({nlohmann::json{
                             {"role", "user"}, {"content", request.prompt}}})},
            {"temperature", request.temperature},
            {"max_tokens", request.max_new_tokens},
        };
        if (!request.stop.empty()) body["stop"] = request.stop;
        const std::string payload = body.dump();

        std::string last_failure;
        const int attempts = std::max(1, config_.retry.max_attempts);
        for (int attempt = 0; attempt < attempts; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(config_.retry.initial_backoff * (1 << (attempt - 1)));
            }
            limiter_.acquire();
            httplib::Client client(url_.origin);
            client.set_connection_timeout(std::chrono::seconds(15));
            client.set_read_timeout(std::chrono::seconds(300));
            httplib::Headers headers;
            if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
            auto res = client.Post(url_.path + "/chat/completions", headers, payload,
                                   "application/json");
            if (!res) {
                last_failure = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 401 || res->status == 403) {
                throw AuthError("endpoint rejected credentials (HTTP " +
                                std::to_string(res->status) + ")");
            }
            if (res->status == 429 || res->status >= 500) {
                last_failure = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status != 200) {
                throw ClientError("HTTP " + std::to_string(res->status) + ": " + res->body);
            }
            return extract_content(res->body);
        }
        throw RetriesExhaustedError("gave up after " + std::to_string(attempts) +
                                    " attempts; last failure: " + last_failure);
    }

    std::string model_id() const override { return config_.model_id; }

  private:
    static std::string extract_content(const std::string& body) {
        nlohmann::json reply = nlohmann::json::parse(body, nullptr, false);
        if (reply.is_discarded()) throw MalformedResponseError("response is not JSON");
        auto choices = reply.find("choices");
        if (choices == reply.end() || !choices->is_array() || choices->empty()) {
            throw MalformedResponseError("response has no choices");
        }
        const auto& first = (*choices)[0];
        if (!first.contains("message") || !first["message"].contains("content") ||
            !first["message"]["content"].is_string()) {
            throw MalformedResponseError("response choice has no message content");
        }
        return first["message"]["content"].get<std::string>();
    }

    EndpointConfig config_;
    ParsedUrl url_;
    RateLimiter limiter_;
    std::string api_key_;
};

}  // namespace

std::unique_ptr<GenerationClient> make_http_client(const EndpointConfig& config) {
    return std::make_unique<HttpEndpointClient>(config);
}

std::unique_ptr<GenerationClient> make_hash_client(std::string prefix, std::string model_id) {
    return std::make_unique<HashClient>(std::move(prefix), std::move(model_id));
}

CassetteRecorder::CassetteRecorder(GenerationClient& inner, const std::filesystem::path& path)
    : inner_(inner), path_(path), out_(std::make_unique<std::ofstream>(path, std::ios::binary)) {
    if (!*out_) throw Error("cannot write cassette " + path.string());
}

CassetteRecorder::~CassetteRecorder() = default;

std::string CassetteRecorder::complete(const GenerationRequest& request) {
    nlohmann::json entry{
        {"prompt", request.prompt},
        {"model", inner_.model_id()},
        {"max_new_tokens", request.max_new_tokens},
        {"temperature", request.temperature},
    };
    try {
        std::string response = inner_.complete(request);
        entry["response"] = response;
        std::lock_guard lock(mutex_);
        *out_ << entry.dump() << '\n' << std::flush;
        return response;
    } catch (const ClientError& err) {
        entry["error"] = std::string(err.what());
        std::lock_guard lock(mutex_);
        *out_ << entry.dump() << '\n' << std::flush;
        throw;
    }
}

ReplayClient::ReplayClient(const std::filesystem::path& path) {
    bool first = true;
    for (const auto& row : read_jsonl(path)) {
        if (!row.contains("prompt") || !row["prompt"].is_string()) {
            throw FormatError(path.string() + ": cassette entry has no prompt");
        }
        Entry entry;
        if (row.contains("response") && row["response"].is_string()) {
            entry.ok = true;
            entry.text = row["response"].get<std::string>();
        } else if (row.contains("error") && row["error"].is_string()) {
            entry.ok = false;
            entry.text = row["error"].get<std::string>();
        } else {
            throw FormatError(path.string() + ": cassette entry has neither response nor error");
        }
        if (first && row.contains("model") && row["model"].is_string()) {
            model_id_ = row["model"].get<std::string>();
            first = false;
        }
        queues_[fnv1a64(row["prompt"].get<std::string>())].push_back(std::move(entry));
    }
}

std::string ReplayClient::complete(const GenerationRequest& request) {
    std::lock_guard lock(mutex_);
    auto it = queues_.find(fnv1a64(request.prompt));
    if (it == queues_.end() || it->second.empty()) {
        throw ClientError("cassette has no recorded response for this prompt");
    }
    Entry entry = std::move(it->second.front());
    it->second.pop_front();
    if (!entry.ok) throw ClientError(entry.text);
    return entry.text;
}

size_t ReplayClient::remaining() const {
    std::lock_guard lock(mutex_);
    size_t total = 0;
    for (const auto& [hash, queue] : queues_) total += queue.size();
    return total;
}

std::vector<CompletionResult> complete_batch(GenerationClient& client,
                                             std::span<const GenerationRequest> requests,
                                             int max_concurrency) {
    std::vector<CompletionResult> results(requests.size());
    if (requests.empty()) return results;
    const int workers =
        static_cast<int>(std::min<size_t>(std::max(1, max_concurrency), requests.size()));
    std::atomic<size_t> cursor{0};
    auto run = [&] {
        for (size_t i = cursor.fetch_add(1); i < requests.size(); i = cursor.fetch_add(1)) {
            try {
                results[i] = {true, client.complete(requests[i]), {}};
            } catch (const std::exception& err) {
                results[i] = {false, {}, err.what()};
            }
        }
    };
    if (workers == 1) {
        run();
        return results;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace attreval
