#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "capital/types.hpp"

namespace capital {

struct TemplateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PromptSection {
    std::string name;
    std::size_t begin = 0;  // byte offsets into PromptText::rendered
    std::size_t end = 0;
};

// A fully rendered prompt plus the ordered section map it was built from.
// Invariant: concatenating the section slices in order reproduces `rendered`
// byte for byte.
struct PromptText {
    std::string rendered;
    std::vector<PromptSection> sections;
};

// Substitutes {name} placeholders in a single pass. Values are inserted
// verbatim and never rescanned, so reasoning text containing braces is safe.
// Throws TemplateError for a placeholder missing from `bindings`.
std::string render_template(std::string_view body,
                            const std::map<std::string, std::string>& bindings);

// "POSITIVE, NEGATIVE, NEUTRAL" or the four-class variant.
std::string label_list(LabelScheme scheme);

// The prompt wording used by every stage. Defaults are compiled in;
// load_directory overrides any template for which a file exists, so wording
// can change without a rebuild.
struct PromptTemplates {
    std::string three_stage_instruction;
    std::string revision_instruction;
    std::string stage1_demo_block;
    std::string revision_demo_block;
    std::string icl_demo_block;
    std::string icl_question;

    static PromptTemplates defaults();
    static PromptTemplates load_directory(const std::filesystem::path& dir);
};

// Maps each template to its override file name inside a template directory.
std::vector<std::pair<std::string, std::string PromptTemplates::*>>
template_file_map();

// The three-stage reasoning instruction (aspect identification, opinion
// inference, polarity prediction) for one test item. Pure: identical inputs
// render byte-identical prompts.
PromptText build_three_stage_instruction(const PromptTemplates& templates,
                                         const Sentence& sentence,
                                         const AspectTerm& aspect,
                                         LabelScheme scheme);

// Stage-1 generation prompt: [d_1, ..., d_R, test]. Each demonstration shows
// its sentence, its correct reasoning, and its answer; order is significant.
PromptText assemble_initial_prompt(const PromptTemplates& templates,
                                   std::span<const Demonstration> demos,
                                   const Sentence& sentence,
                                   const AspectTerm& aspect,
                                   LabelScheme scheme);

// Answer-only demonstrations followed by the direct polarity question.
PromptText assemble_icl_prompt(const PromptTemplates& templates,
                               std::span<const Demonstration> demos,
                               const Sentence& sentence,
                               const AspectTerm& aspect, LabelScheme scheme);

// Stage-2 revision prompt. `ranked_demos` arrives most-similar-first; the
// default layout renders them in reversed rank order so the most similar
// demonstration sits adjacent to the test block. `reverse_order` flips that
// layout (the NWGM-Reverse ablation). Each demonstration shows its wrong
// reasoning next to its corrected reasoning; the representative reasoning to
// improve is appended after the instruction.
PromptText assemble_revision_prompt(const PromptTemplates& templates,
                                    std::span<const Demonstration> ranked_demos,
                                    const Sentence& sentence,
                                    const AspectTerm& aspect,
                                    const ChainOfThought& centroid_cot,
                                    LabelScheme scheme,
                                    bool reverse_order = false);

}  // namespace capital
