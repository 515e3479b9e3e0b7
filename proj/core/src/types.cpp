#include "capital/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace capital {

namespace {

constexpr std::array<Polarity, 4> kAllLabels = {
    Polarity::Positive, Polarity::Negative, Polarity::Neutral,
    Polarity::Conflict};

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

}  // namespace

std::string_view to_string(Polarity p) {
    switch (p) {
        case Polarity::Positive: return "positive";
        case Polarity::Negative: return "negative";
        case Polarity::Neutral: return "neutral";
        case Polarity::Conflict: return "conflict";
    }
    return "unknown";
}

std::span<const Polarity> scheme_labels(LabelScheme scheme) {
    return {kAllLabels.data(),
            scheme == LabelScheme::FourClass ? std::size_t{4} : std::size_t{3}};
}

bool scheme_allows(LabelScheme scheme, Polarity p) {
    return p != Polarity::Conflict || scheme == LabelScheme::FourClass;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

std::optional<Polarity> normalize_label(std::string_view raw,
                                        LabelScheme scheme) {
    const std::string_view token = trim(raw);
    for (Polarity p : scheme_labels(scheme)) {
        if (iequals(token, to_string(p))) return p;
    }
    return std::nullopt;
}

std::optional<Polarity> parse_polarity(std::string_view completion_text,
                                       LabelScheme scheme) {
    const std::string haystack = to_lower(completion_text);
    std::optional<Polarity> best;
    std::size_t best_pos = 0;
    for (Polarity p : scheme_labels(scheme)) {
        const std::string_view word = to_string(p);
        const std::size_t pos = haystack.rfind(word);
        if (pos == std::string::npos) continue;
        if (!best || pos > best_pos) {
            best = p;
            best_pos = pos;
        }
    }
    return best;
}

Sentence make_sentence(std::string id, std::string text) {
    if (trim(text).empty())
        throw std::invalid_argument("sentence text is empty: id=" + id);
    return Sentence{std::move(id), std::move(text)};
}

AspectTerm make_aspect(std::string surface) {
    if (trim(surface).empty())
        throw std::invalid_argument("aspect surface is empty");
    return AspectTerm{std::move(surface), std::nullopt};
}

void validate_aspect_span(const Sentence& sentence, const AspectTerm& aspect) {
    if (trim(aspect.surface).empty())
        throw std::invalid_argument("aspect surface is empty");
    if (!aspect.char_span) return;
    const auto [begin, end] = *aspect.char_span;
    if (begin > end || end > sentence.text.size())
        throw std::invalid_argument("aspect span out of range for sentence " +
                                    sentence.id);
    const std::string_view slice =
        std::string_view(sentence.text).substr(begin, end - begin);
    if (!iequals(slice, aspect.surface))
        throw std::invalid_argument(
            "aspect span does not match surface in sentence " + sentence.id);
}

Demonstration make_demonstration(Sentence sentence, AspectTerm aspect,
                                 Polarity gold, ChainOfThought wrong_cot,
                                 ChainOfThought correct_cot) {
    Demonstration demo{std::move(sentence), std::move(aspect),   gold,
                       std::move(wrong_cot), std::move(correct_cot), {}};
    validate_demonstration(demo);
    return demo;
}

void validate_demonstration(const Demonstration& demo) {
    if (!demo.wrong_cot.parsed_answer)
        throw std::invalid_argument("demonstration " + demo.sentence.id +
                                    ": wrong CoT has no parsed answer");
    if (!demo.correct_cot.parsed_answer)
        throw std::invalid_argument("demonstration " + demo.sentence.id +
                                    ": correct CoT has no parsed answer");
    if (*demo.wrong_cot.parsed_answer == demo.gold)
        throw std::invalid_argument("demonstration " + demo.sentence.id +
                                    ": wrong CoT answer equals gold label");
    if (*demo.correct_cot.parsed_answer != demo.gold)
        throw std::invalid_argument(
            "demonstration " + demo.sentence.id +
            ": correct CoT answer differs from gold label");
}

void PipelineConfig::validate() const {
    if (demos_r < 0) throw std::invalid_argument("demos_r must be >= 0");
    if (cot_samples_a < 1)
        throw std::invalid_argument("cot_samples_a must be >= 1");
    if (clusters_k < 1 || clusters_k > cot_samples_a)
        throw std::invalid_argument("clusters_k must satisfy 1 <= K <= A");
    if (revision_queries_n < 1)
        throw std::invalid_argument("revision_queries_n must be >= 1");
    if (revision_demos_l < 0)
        throw std::invalid_argument("revision_demos_l must be >= 0");
    if (!(sampling_temperature > 0.0) ||
        !std::isfinite(sampling_temperature))
        throw std::invalid_argument("sampling_temperature must be > 0");
}

}  // namespace capital
