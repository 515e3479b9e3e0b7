#include "capital/backend.hpp"

#include <fstream>

#include <json.hpp>

#include "capital/rng.hpp"

namespace capital {

namespace {

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace

std::string prompt_fingerprint(std::string_view prompt) {
    return hex64(fnv1a64(prompt));
}

void Script::add(std::string_view prompt, std::vector<std::string> completions,
                 std::string alias) {
    Entry e;
    e.fingerprint = prompt_fingerprint(prompt);
    e.alias = std::move(alias);
    e.prompt_echo = std::string(prompt);
    e.completions = std::move(completions);
    entries_.push_back(std::move(e));
}

void Script::add_fingerprint(std::string fingerprint,
                             std::vector<std::string> completions,
                             std::string alias) {
    Entry e;
    e.fingerprint = std::move(fingerprint);
    e.alias = std::move(alias);
    e.completions = std::move(completions);
    entries_.push_back(std::move(e));
}

void Script::add_contains(std::string matcher,
                          std::vector<std::string> completions) {
    Entry e;
    e.contains = std::move(matcher);
    e.completions = std::move(completions);
    entries_.push_back(std::move(e));
}

Script Script::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open script file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed script file " + path.string() +
                                 ": " + e.what());
    }
    Script script;
    for (const auto& item : doc.at("entries")) {
        std::vector<std::string> completions =
            item.at("completions").get<std::vector<std::string>>();
        const std::string alias = item.value("alias", "");
        if (item.contains("prompt")) {
            script.add(item.at("prompt").get<std::string>(),
                       std::move(completions), alias);
        } else if (item.contains("fingerprint")) {
            script.add_fingerprint(item.at("fingerprint").get<std::string>(),
                                   std::move(completions), alias);
        } else if (item.contains("prompt_contains")) {
            script.add_contains(item.at("prompt_contains").get<std::string>(),
                                std::move(completions));
        } else {
            throw std::runtime_error(
                "script entry needs prompt, fingerprint, or prompt_contains");
        }
    }
    return script;
}

void Script::save(const std::filesystem::path& path) const {
    nlohmann::json entries = nlohmann::json::array();
    for (const Entry& e : entries_) {
        nlohmann::json item;
        if (!e.contains.empty()) {
            item["prompt_contains"] = e.contains;
        } else if (!e.prompt_echo.empty()) {
            item["prompt"] = e.prompt_echo;
        } else {
            item["fingerprint"] = e.fingerprint;
        }
        if (!e.alias.empty()) item["alias"] = e.alias;
        item["completions"] = e.completions;
        entries.push_back(std::move(item));
    }
    nlohmann::json doc{{"entries", std::move(entries)}};
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write script file " + path.string());
    out << doc.dump(2) << '\n';
}

const std::vector<std::string>* Script::find(std::string_view prompt) const {
    const std::string fp = prompt_fingerprint(prompt);
    for (const Entry& e : entries_) {
        if (!e.fingerprint.empty() && e.fingerprint == fp)
            return &e.completions;
    }
    const Entry* match = nullptr;
    for (const Entry& e : entries_) {
        if (e.contains.empty()) continue;
        if (prompt.find(e.contains) == std::string_view::npos) continue;
        if (match)
            throw ScriptMiss("prompt matches multiple contains-entries: \"" +
                             match->contains + "\" and \"" + e.contains + "\"");
        match = &e;
    }
    return match ? &match->completions : nullptr;
}

std::size_t Script::size() const { return entries_.size(); }

std::vector<Completion> ScriptedBackend::sample(
    const GenerationRequest& request) {
    calls_.fetch_add(1);
    const std::vector<std::string>* completions = script_.find(request.prompt);
    if (!completions)
        throw ScriptMiss("no script entry for prompt fingerprint " +
                         prompt_fingerprint(request.prompt) +
                         " (prompt head: \"" +
                         std::string(request.prompt.substr(0, 80)) + "...\")");
    if (completions->size() < static_cast<std::size_t>(request.count))
        throw ScriptMiss("script entry has " +
                         std::to_string(completions->size()) +
                         " completions, request wants " +
                         std::to_string(request.count));
    std::vector<Completion> out;
    out.reserve(static_cast<std::size_t>(request.count));
    for (int i = 0; i < request.count; ++i)
        out.push_back({(*completions)[static_cast<std::size_t>(i)], id(), false});
    return out;
}

}  // namespace capital
