#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "capital/backend.hpp"
#include "capital/encoder.hpp"

namespace capital {

struct RetryPolicy {
    int max_attempts = 5;  // total attempts, including the first
    double initial_backoff_seconds = 0.5;
    double backoff_multiplier = 2.0;
    double max_backoff_seconds = 8.0;

    double delay_seconds(int completed_attempts) const;
};

struct HttpResponse {
    int status = 0;
    std::string body;
    std::map<std::string, std::string> headers;  // lower-cased keys
};

// One POST with a JSON body. Implementations throw TransportError for
// network-level failures; HTTP error statuses come back as responses.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse post(const std::string& path,
                              const std::string& json_body) = 0;
};

struct HttpEndpointConfig {
    std::string base_url = "http://127.0.0.1:8000";
    std::string model = "gpt-3.5-turbo";
    std::string api_key_env = "OPENAI_API_KEY";  // name only; value from env
    double timeout_seconds = 120.0;
    RetryPolicy retry;
    // When false, every completion is fetched with n=1 calls instead of one
    // n=count request. Both are treated as equivalent samples.
    bool use_n_parameter = true;
};

using SleepFn = std::function<void(std::chrono::duration<double>)>;

// OpenAI-compatible chat-completions client (POST /v1/chat/completions).
// Retries transport errors and 429/5xx with exponential backoff, honoring
// Retry-After hints, never exceeding the configured attempt budget.
class HttpBackend final : public Backend {
public:
    explicit HttpBackend(HttpEndpointConfig config,
                         std::unique_ptr<HttpTransport> transport = nullptr,
                         SleepFn sleeper = {});

    std::vector<Completion> sample(const GenerationRequest& request) override;
    std::string id() const override;
    std::uint64_t calls_made() const override { return calls_.load(); }

    // Total retry sleeps performed across all requests.
    std::uint64_t retries_recorded() const { return retries_.load(); }

private:
    HttpResponse post_with_retry(const std::string& path,
                                 const std::string& body);

    HttpEndpointConfig config_;
    std::unique_ptr<HttpTransport> transport_;
    SleepFn sleep_;
    std::atomic<std::uint64_t> calls_{0};
    std::atomic<std::uint64_t> retries_{0};
};

// OpenAI-compatible embeddings client (POST /v1/embeddings). Responses are
// L2-normalized before use.
class RemoteEncoder final : public Encoder {
public:
    RemoteEncoder(HttpEndpointConfig config, std::size_t dim,
                  std::unique_ptr<HttpTransport> transport = nullptr,
                  SleepFn sleeper = {});

    EmbeddingVector embed(std::string_view text) override;
    std::size_t dim() const override { return dim_; }
    std::string id() const override;

private:
    HttpEndpointConfig config_;
    std::size_t dim_;
    std::unique_ptr<HttpTransport> transport_;
    SleepFn sleep_;
};

// Production transport backed by cpp-httplib.
std::unique_ptr<HttpTransport> make_httplib_transport(
    const HttpEndpointConfig& config);

}  // namespace capital
