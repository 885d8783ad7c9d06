#pragma once

#include <chrono>
#include <deque>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace attreval {

struct GenerationRequest {
    std::string prompt;
    int max_new_tokens = 256;
    double temperature = 0.0;
    std::vector<std::string> stop;
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{250};  // doubles per attempt
};

/// Where and how to reach a chat-completion endpoint. The credential is
/// looked up in the environment by name at connect time and never stored.
struct EndpointConfig {
    std::string base_url;        // e.g. http://localhost:8000/v1
    std::string model_id;
    std::string credential_env;  // env var holding the API key; empty = anonymous
    int max_concurrency = 4;
    int requests_per_minute = 0;  // 0 = unthrottled
    RetryPolicy retry;
};

/// Anything that can turn a prompt into a completion. Implementations throw
/// ClientError subtypes on failure. complete() may be called concurrently.
class GenerationClient {
  public:
    virtual ~GenerationClient() = default;
    virtual std::string complete(const GenerationRequest& request) = 0;
    virtual std::string model_id() const = 0;
};

/// Table-driven fake for tests and offline runs: responses are keyed by the
/// fnv1a64 hash of the exact prompt. Configure before use; configuration is
/// not thread safe, complete() is.
class MockClient : public GenerationClient {
  public:
    void add_response(std::string_view prompt, std::string response);
    void set_default_response(std::string response);
    /// Catch-all hook consulted when no canned response matches.
    void set_handler(std::function<std::string(const GenerationRequest&)> handler);
    void set_model_id(std::string id) { model_id_ = std::move(id); }

    std::string complete(const GenerationRequest& request) override;
    std::string model_id() const override { return model_id_; }
    int calls() const;

  private:
    std::unordered_map<uint64_t, std::string> responses_;
    std::optional<std::string> default_response_;
    std::function<std::string(const GenerationRequest&)> handler_;
    std::string model_id_ = "mock";
    mutable std::mutex mutex_;
    int calls_ = 0;
};

/// Deterministic offline stand-in: replies with `prefix` plus a short hex
/// hash of the prompt. Serves as a substitution generator in dry runs.
std::unique_ptr<GenerationClient> make_hash_client(std::string prefix = "alt-",
                                                   std::string model_id = "hash-mock");

/// HTTP client speaking the chat-completion wire format:
///   POST {base_url}/chat/completions
///   {"model", "messages":[{"role":"user","content":prompt}], ...}
/// Retries transport errors, 5xx, and 429 with exponential backoff. Throws
/// AuthError on 401/403 or when credential_env names an unset variable.
std::unique_ptr<GenerationClient> make_http_client(const EndpointConfig& config);

/// Wraps another client and appends every exchange to a JSONL cassette.
/// Failures are recorded too, then rethrown.
class CassetteRecorder : public GenerationClient {
  public:
    CassetteRecorder(GenerationClient& inner, const std::filesystem::path& path);
    ~CassetteRecorder() override;

    std::string complete(const GenerationRequest& request) override;
    std::string model_id() const override { return inner_.model_id(); }

  private:
    GenerationClient& inner_;
    std::filesystem::path path_;
    std::unique_ptr<std::ofstream> out_;
    std::mutex mutex_;
};

/// Replays a recorded cassette without touching the network. Responses for
/// one prompt are consumed in recorded order; an unknown prompt or an
/// exhausted queue throws ClientError.
class ReplayClient : public GenerationClient {
  public:
    explicit ReplayClient(const std::filesystem::path& path);

    std::string complete(const GenerationRequest& request) override;
    std::string model_id() const override { return model_id_; }
    size_t remaining() const;

  private:
    struct Entry {
        bool ok = false;
        std::string text;  // response when ok, error message otherwise
    };
    std::unordered_map<uint64_t, std::deque<Entry>> queues_;
    std::string model_id_ = "replay";
    mutable std::mutex mutex_;
};

struct CompletionResult {
    bool ok = false;
    std::string text;   // completion on success
    std::string error;  // failure note otherwise
};

/// Runs all requests with at most max_concurrency in flight. Results align
/// positionally with requests; one failure does not disturb the others.
std::vector<CompletionResult> complete_batch(GenerationClient& client,
                                             std::span<const GenerationRequest> requests,
                                             int max_concurrency);

}  // namespace attreval
