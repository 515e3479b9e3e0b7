#include "capital/http_backend.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace capital {

namespace {

void default_sleep(std::chrono::duration<double> d) {
    std::this_thread::sleep_for(d);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(c));
    return s;
}

class HttplibTransport final : public HttpTransport {
public:
    explicit HttplibTransport(HttpEndpointConfig config)
        : config_(std::move(config)) {
        if (const char* key = std::getenv(config_.api_key_env.c_str()))
            api_key_ = key;
    }

    HttpResponse post(const std::string& path,
                      const std::string& json_body) override {
        // One client per call: httplib clients are not safe to share across
        // threads, and the pipeline submits requests concurrently.
        httplib::Client client(config_.base_url);
        client.set_connection_timeout(std::chrono::duration<double>(
            config_.timeout_seconds));
        client.set_read_timeout(
            std::chrono::duration<double>(config_.timeout_seconds));
        httplib::Headers headers;
        if (!api_key_.empty())
            headers.emplace("Authorization", "Bearer " + api_key_);
        auto result = client.Post(path, headers, json_body, "application/json");
        if (!result)
            throw TransportError("POST " + config_.base_url + path + ": " +
                                 httplib::to_string(result.error()));
        HttpResponse response;
        response.status = result->status;
        response.body = result->body;
        for (const auto& [k, v] : result->headers)
            response.headers[lower(k)] = v;
        return response;
    }

private:
    HttpEndpointConfig config_;
    std::string api_key_;
};

std::optional<double> retry_after_hint(const HttpResponse& response) {
    const auto it = response.headers.find("retry-after");
    if (it == response.headers.end()) return std::nullopt;
    try {
        return std::stod(it->second);
    } catch (...) {
        return std::nullopt;
    }
}

}  // namespace

double RetryPolicy::delay_seconds(int completed_attempts) const {
    double d = initial_backoff_seconds;
    for (int i = 1; i < completed_attempts; ++i) d *= backoff_multiplier;
    return std::min(d, max_backoff_seconds);
}

std::unique_ptr<HttpTransport> make_httplib_transport(
    const HttpEndpointConfig& config) {
    return std::make_unique<HttplibTransport>(config);
}

HttpBackend::HttpBackend(HttpEndpointConfig config,
                         std::unique_ptr<HttpTransport> transport,
                         SleepFn sleeper)
    : config_(std::move(config)),
      transport_(transport ? std::move(transport)
                           : make_httplib_transport(config_)),
      sleep_(sleeper ? std::move(sleeper) : default_sleep) {}

std::string HttpBackend::id() const {
    return "http/" + config_.model;
}

HttpResponse HttpBackend::post_with_retry(const std::string& path,
                                          const std::string& body) {
    for (int attempt = 1;; ++attempt) {
        std::optional<double> hint;
        std::string last_error;
        try {
            HttpResponse response = transport_->post(path, body);
            if (response.status == 200) return response;
            if (response.status == 429) {
                hint = retry_after_hint(response);
                last_error = "HTTP 429";
            } else if (response.status >= 500) {
                last_error = "HTTP " + std::to_string(response.status);
            } else {
                throw TransportError("HTTP " + std::to_string(response.status) +
                                     ": " + response.body.substr(0, 200));
            }
        } catch (const TransportError& e) {
            last_error = e.what();
        }
        if (attempt >= config_.retry.max_attempts) {
            if (hint)
                throw RateLimited("rate limited after " +
                                      std::to_string(attempt) + " attempts",
                                  hint);
            throw TransportError(last_error + " (after " +
                                 std::to_string(attempt) + " attempts)");
        }
        const double delay =
            hint ? *hint : config_.retry.delay_seconds(attempt);
        retries_.fetch_add(1);
        sleep_(std::chrono::duration<double>(delay));
    }
}

std::vector<Completion> HttpBackend::sample(const GenerationRequest& request) {
    calls_.fetch_add(1);
    std::vector<Completion> out;
    out.reserve(static_cast<std::size_t>(request.count));
    while (out.size() < static_cast<std::size_t>(request.count)) {
        const int remaining =
            request.count - static_cast<int>(out.size());
        const int n = config_.use_n_parameter ? remaining : 1;
        const nlohmann::json body = {
            {"model", config_.model},
            {"messages",
             {{{"role", "user"}, {"content", request.prompt}}}},
            {"temperature", request.temperature},
            {"n", n},
            {"max_tokens", request.max_tokens},
        };
        const HttpResponse response =
            post_with_retry("/v1/chat/completions", body.dump());
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(response.body);
            const auto& choices = doc.at("choices");
            if (choices.empty())
                throw TransportError("response carried no choices");
            for (const auto& choice : choices) {
                if (out.size() >= static_cast<std::size_t>(request.count))
                    break;
                out.push_back({choice.at("message").at("content")
                                   .get<std::string>(),
                               id(), false});
            }
        } catch (const nlohmann::json::exception& e) {
            throw TransportError(std::string("unparseable completion body: ") +
                                 e.what());
        }
    }
    return out;
}

RemoteEncoder::RemoteEncoder(HttpEndpointConfig config, std::size_t dim,
                             std::unique_ptr<HttpTransport> transport,
                             SleepFn sleeper)
    : config_(std::move(config)),
      dim_(dim),
      transport_(transport ? std::move(transport)
                           : make_httplib_transport(config_)),
      sleep_(sleeper ? std::move(sleeper) : default_sleep) {
    if (dim_ == 0) throw std::invalid_argument("encoder dim must be positive");
}

std::string RemoteEncoder::id() const {
    return "remote/" + config_.model;
}

EmbeddingVector RemoteEncoder::embed(std::string_view text) {
    if (text.empty()) throw EmptyText("cannot embed empty text");
    const nlohmann::json body = {
        {"model", config_.model},
        {"input", std::string(text)},
    };
    // Single-attempt semantics plus the shared retry policy.
    for (int attempt = 1;; ++attempt) {
        try {
            const HttpResponse response =
                transport_->post("/v1/embeddings", body.dump());
            if (response.status != 200)
                throw TransportError("HTTP " +
                                     std::to_string(response.status));
            const nlohmann::json doc = nlohmann::json::parse(response.body);
            EmbeddingVector v;
            v.values =
                doc.at("data").at(0).at("embedding").get<std::vector<double>>();
            if (v.dim() != dim_)
                throw DimensionMismatch(
                    "embedding endpoint returned dim " +
                    std::to_string(v.dim()) + ", expected " +
                    std::to_string(dim_));
            l2_normalize(v);
            return v;
        } catch (const DimensionMismatch&) {
            throw;
        } catch (const nlohmann::json::exception& e) {
            throw TransportError(std::string("unparseable embedding body: ") +
                                 e.what());
        } catch (const TransportError&) {
            if (attempt >= config_.retry.max_attempts) throw;
            sleep_(std::chrono::duration<double>(
                config_.retry.delay_seconds(attempt)));
        }
    }
}

}  // namespace capital
