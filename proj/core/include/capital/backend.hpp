#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace capital {

struct GenerationRequest {
    std::string prompt;  // fully rendered prompt text
    double temperature = 0.7;
    int count = 1;  // completions requested; one call may cover many samples
    int max_tokens = 1024;
    std::string request_tag;  // cache scoping, e.g. "stage1" or a seed tag
};

struct Completion {
    std::string text;
    std::string backend_id;
    bool cached = false;
};

// Transient transport failure; retryable.
struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Server-side throttling; retryable after the server hint when present.
struct RateLimited : TransportError {
    explicit RateLimited(const std::string& what,
                         std::optional<double> retry_after = std::nullopt)
        : TransportError(what), retry_after_seconds(retry_after) {}
    std::optional<double> retry_after_seconds;
};

// A scripted run hit a prompt nobody registered: a test configuration bug.
struct ScriptMiss : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Stable identifier for a rendered prompt, persisted in script files.
std::string prompt_fingerprint(std::string_view prompt);

class Backend {
public:
    virtual ~Backend() = default;

    // Returns exactly request.count completions or throws. Implementations
    // must be safe for concurrent calls.
    virtual std::vector<Completion> sample(const GenerationRequest& request) = 0;
    virtual std::string id() const = 0;

    // Number of sample() invocations that reached this backend.
    virtual std::uint64_t calls_made() const = 0;
};

// A deterministic test double: maps prompt fingerprints to fixed completion
// arrays. Entries can be registered from code or loaded from a JSON file
// whose entries carry either a full prompt (fingerprinted at load), a raw
// fingerprint, or a substring matcher resolved at request time.
class Script {
public:
    void add(std::string_view prompt, std::vector<std::string> completions,
             std::string alias = {});
    void add_fingerprint(std::string fingerprint,
                         std::vector<std::string> completions,
                         std::string alias = {});
    void add_contains(std::string matcher,
                      std::vector<std::string> completions);

    static Script load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    // Fingerprint lookup first, then the substring matchers (which must
    // match at most one entry). nullptr when nothing matches.
    const std::vector<std::string>* find(std::string_view prompt) const;

    std::size_t size() const;

private:
    struct Entry {
        std::string fingerprint;  // empty for contains-matchers
        std::string contains;
        std::string alias;
        std::string prompt_echo;  // kept for save() round-trips
        std::vector<std::string> completions;
    };
    std::vector<Entry> entries_;
};

class ScriptedBackend final : public Backend {
public:
    explicit ScriptedBackend(Script script) : script_(std::move(script)) {}

    // Returns the first `count` completions of the matching entry, in index
    // order. Throws ScriptMiss when no entry matches or the entry holds
    // fewer than `count` completions.
    std::vector<Completion> sample(const GenerationRequest& request) override;

    std::string id() const override { return "scripted"; }
    std::uint64_t calls_made() const override { return calls_.load(); }

private:
    Script script_;
    std::atomic<std::uint64_t> calls_{0};
};

}  // namespace capital
