#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace capital {

// Fixed order; also the tie-breaking order everywhere a tie on scores or
// vote counts has to resolve to a single label.
enum class Polarity { Positive, Negative, Neutral, Conflict };

// Conflict is only a legal label under the four-class scheme.
enum class LabelScheme { ThreeClass, FourClass };

std::string_view to_string(Polarity p);
std::span<const Polarity> scheme_labels(LabelScheme scheme);
bool scheme_allows(LabelScheme scheme, Polarity p);

// Case-insensitive, whitespace-trimmed mapping of a label token onto the
// enumeration. No abbreviation matching; unknown tokens map to nullopt.
std::optional<Polarity> normalize_label(std::string_view raw, LabelScheme scheme);

// Extracts the predicted label from a full completion: the LAST
// case-insensitive occurrence of a scheme label word wins, so the stage-3
// conclusion beats labels mentioned mid-reasoning. nullopt when no label
// word occurs at all.
std::optional<Polarity> parse_polarity(std::string_view completion_text,
                                       LabelScheme scheme);

struct Sentence {
    std::string id;
    std::string text;
};

// Throws std::invalid_argument when text is empty after trimming.
Sentence make_sentence(std::string id, std::string text);

struct AspectTerm {
    std::string surface;
    // (start, end) byte offsets into the owning sentence, end exclusive.
    std::optional<std::pair<std::size_t, std::size_t>> char_span;
};

AspectTerm make_aspect(std::string surface);

// When a span is present, sentence.text[span] must equal the surface
// case-insensitively. Throws std::invalid_argument otherwise.
void validate_aspect_span(const Sentence& sentence, const AspectTerm& aspect);

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

struct ChainOfThought {
    std::string text;
    std::optional<Polarity> parsed_answer;
    std::optional<EmbeddingVector> embedding;
    int sample_index = 0;  // 1-based, unique within one generation batch
};

// One training example: a sentence paired with one reasoning chain that
// reaches the wrong label and one that reaches the gold label.
struct Demonstration {
    Sentence sentence;
    AspectTerm aspect;
    Polarity gold = Polarity::Neutral;
    ChainOfThought wrong_cot;
    ChainOfThought correct_cot;
    EmbeddingVector wrong_embedding;  // filled when a store indexes the entry
};

// Enforces wrong_cot.parsed_answer != gold and correct_cot.parsed_answer ==
// gold; both answers must be present. Throws std::invalid_argument.
Demonstration make_demonstration(Sentence sentence, AspectTerm aspect,
                                 Polarity gold, ChainOfThought wrong_cot,
                                 ChainOfThought correct_cot);

void validate_demonstration(const Demonstration& demo);

struct PipelineConfig {
    int demos_r = 3;               // stage-1 in-context demonstrations
    int cot_samples_a = 20;        // sampled reasoning chains per item
    int clusters_k = 8;            // 8 suits Restaurant-style data, 12 Laptop
    int revision_queries_n = 5;    // stage-2 queries per cluster
    int revision_demos_l = 3;      // demonstrations in the revision prompt
    double sampling_temperature = 0.7;
    LabelScheme label_scheme = LabelScheme::ThreeClass;
    std::uint64_t rng_seed = 0;

    // Throws std::invalid_argument when any bound is violated
    // (R >= 0, A >= 1, 1 <= K <= A, N >= 1, L >= 0, temperature > 0).
    void validate() const;
};

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

}  // namespace capital
