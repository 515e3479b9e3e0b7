#include "capital/prompt.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace capital {

namespace {

const char* kThreeStageInstruction =
    R"(Based solely on the provided sentence and aspect, generate a 3-stage Chain-of-Thought reasoning to predict sentiment polarity.

Reason through the text step by step and provide the final answer in the end.

Reasoning Structure:

Stage 1: Aspect Identification
- Locate and analyze the aspect in context
- Extract explicit descriptions related to the aspect
- Evidence focus: identify key phrases describing the aspect

Stage 2: Opinion Inference
- Deduce underlying attitudes toward the aspect
- Connect linguistic cues to real-world implications
- Interpretation focus: bridge literal meaning to sentiment implications

Stage 3: Polarity Prediction
- Predict the sentiment polarity toward the aspect
- Justify using language elements (modifiers, comparatives, etc.)
- Address any conflicting evidence
- Classification focus: synthesize evidence into the final sentiment

Analyze the polarity of the aspect term in the text: {labels}.

Sentence: {sentence}
Aspect: {aspect}
)";

const char* kRevisionInstruction =
    R"(Based solely on the provided sentence and aspect, generate a 3-stage Chain-of-Thought reasoning to predict sentiment polarity.

Reason through the text step by step and provide the final answer in the end. I will provide a reasoning process; please improve the reasoning process and make sure you get the correct answer.

Reasoning Structure:

Stage 1: Aspect Identification
- Locate and analyze the aspect in context
- Extract explicit descriptions related to the aspect
- Evidence focus: identify key phrases describing the aspect

Stage 2: Opinion Inference
- Deduce underlying attitudes toward the aspect
- Connect linguistic cues to real-world implications
- Interpretation focus: bridge literal meaning to sentiment implications

Stage 3: Polarity Prediction
- Predict the sentiment polarity toward the aspect
- Justify using language elements (modifiers, comparatives, etc.)
- Address any conflicting evidence
- Classification focus: synthesize evidence into the final sentiment

Analyze the polarity of the aspect term in the text: {labels}.

Sentence: {sentence}
Aspect: {aspect}

Reasoning process to improve:
{cot}
)";

const char* kStage1DemoBlock =
    R"(Sentence: {sentence}
Aspect: {aspect}
Reasoning: {reasoning}
Answer: {answer}

)";

const char* kRevisionDemoBlock =
    R"(Sentence: {sentence}
Aspect: {aspect}
Flawed reasoning: {wrong_reasoning}
Improved reasoning: {correct_reasoning}
Answer: {answer}

)";

const char* kIclDemoBlock =
    R"(Sentence: {sentence}
Aspect: {aspect}
Answer: {answer}

)";

const char* kIclQuestion =
    R"(Given the sentence "{sentence}", what is the sentiment polarity towards "{aspect}"? Answer with one of: {labels}.
)";

std::string upper_label(Polarity p) {
    std::string word(to_string(p));
    for (char& c : word) c = static_cast<char>(std::toupper(c));
    return word;
}

void append_section(PromptText& prompt, std::string name, std::string text) {
    const std::size_t begin = prompt.rendered.size();
    prompt.rendered += text;
    prompt.sections.push_back({std::move(name), begin, prompt.rendered.size()});
}

std::string demo_index_name(std::size_t i) {
    return "demo[" + std::to_string(i) + "]";
}

}  // namespace

std::string render_template(
    std::string_view body, const std::map<std::string, std::string>& bindings) {
    std::string out;
    out.reserve(body.size());
    std::size_t pos = 0;
    while (pos < body.size()) {
        const std::size_t open = body.find('{', pos);
        if (open == std::string_view::npos) {
            out.append(body.substr(pos));
            break;
        }
        out.append(body.substr(pos, open - pos));
        const std::size_t close = body.find('}', open + 1);
        if (close == std::string_view::npos)
            throw TemplateError("unterminated placeholder in template");
        const std::string name(body.substr(open + 1, close - open - 1));
        const auto it = bindings.find(name);
        if (it == bindings.end())
            throw TemplateError("unbound placeholder {" + name + "}");
        out.append(it->second);
        pos = close + 1;
    }
    return out;
}

std::string label_list(LabelScheme scheme) {
    if (scheme == LabelScheme::FourClass)
        return "POSITIVE, NEGATIVE, CONFLICT, NEUTRAL";
    return "POSITIVE, NEGATIVE, NEUTRAL";
}

PromptTemplates PromptTemplates::defaults() {
    PromptTemplates t;
    t.three_stage_instruction = kThreeStageInstruction;
    t.revision_instruction = kRevisionInstruction;
    t.stage1_demo_block = kStage1DemoBlock;
    t.revision_demo_block = kRevisionDemoBlock;
    t.icl_demo_block = kIclDemoBlock;
    t.icl_question = kIclQuestion;
    return t;
}

std::vector<std::pair<std::string, std::string PromptTemplates::*>>
template_file_map() {
    return {
        {"three_stage_instruction.txt", &PromptTemplates::three_stage_instruction},
        {"revision_instruction.txt", &PromptTemplates::revision_instruction},
        {"stage1_demo_block.txt", &PromptTemplates::stage1_demo_block},
        {"revision_demo_block.txt", &PromptTemplates::revision_demo_block},
        {"icl_demo_block.txt", &PromptTemplates::icl_demo_block},
        {"icl_question.txt", &PromptTemplates::icl_question},
    };
}

PromptTemplates PromptTemplates::load_directory(
    const std::filesystem::path& dir) {
    PromptTemplates t = defaults();
    for (const auto& [file, member] : template_file_map()) {
        const std::filesystem::path path = dir / file;
        if (!std::filesystem::exists(path)) continue;
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw TemplateError("cannot read template file " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        t.*member = buf.str();
    }
    return t;
}

PromptText build_three_stage_instruction(const PromptTemplates& templates,
                                         const Sentence& sentence,
                                         const AspectTerm& aspect,
                                         LabelScheme scheme) {
    PromptText prompt;
    append_section(prompt, "test",
                   render_template(templates.three_stage_instruction,
                                   {{"sentence", sentence.text},
                                    {"aspect", aspect.surface},
                                    {"labels", label_list(scheme)}}));
    return prompt;
}

PromptText assemble_initial_prompt(const PromptTemplates& templates,
                                   std::span<const Demonstration> demos,
                                   const Sentence& sentence,
                                   const AspectTerm& aspect,
                                   LabelScheme scheme) {
    PromptText prompt;
    for (std::size_t i = 0; i < demos.size(); ++i) {
        const Demonstration& d = demos[i];
        append_section(
            prompt, demo_index_name(i),
            render_template(templates.stage1_demo_block,
                            {{"sentence", d.sentence.text},
                             {"aspect", d.aspect.surface},
                             {"reasoning", d.correct_cot.text},
                             {"answer", upper_label(d.gold)}}));
    }
    append_section(prompt, "test",
                   render_template(templates.three_stage_instruction,
                                   {{"sentence", sentence.text},
                                    {"aspect", aspect.surface},
                                    {"labels", label_list(scheme)}}));
    return prompt;
}

PromptText assemble_icl_prompt(const PromptTemplates& templates,
                               std::span<const Demonstration> demos,
                               const Sentence& sentence,
                               const AspectTerm& aspect, LabelScheme scheme) {
    PromptText prompt;
    for (std::size_t i = 0; i < demos.size(); ++i) {
        const Demonstration& d = demos[i];
        append_section(prompt, demo_index_name(i),
                       render_template(templates.icl_demo_block,
                                       {{"sentence", d.sentence.text},
                                        {"aspect", d.aspect.surface},
                                        {"answer", upper_label(d.gold)}}));
    }
    append_section(prompt, "test",
                   render_template(templates.icl_question,
                                   {{"sentence", sentence.text},
                                    {"aspect", aspect.surface},
                                    {"labels", label_list(scheme)}}));
    return prompt;
}

PromptText assemble_revision_prompt(const PromptTemplates& templates,
                                    std::span<const Demonstration> ranked_demos,
                                    const Sentence& sentence,
                                    const AspectTerm& aspect,
                                    const ChainOfThought& centroid_cot,
                                    LabelScheme scheme, bool reverse_order) {
    PromptText prompt;
    const std::size_t n = ranked_demos.size();
    for (std::size_t i = 0; i < n; ++i) {
        // Default layout walks the ranked list backwards so rank 1 lands
        // last, directly before the test block.
        const std::size_t rank = reverse_order ? i : n - 1 - i;
        const Demonstration& d = ranked_demos[rank];
        append_section(
            prompt, demo_index_name(rank),
            render_template(templates.revision_demo_block,
                            {{"sentence", d.sentence.text},
                             {"aspect", d.aspect.surface},
                             {"wrong_reasoning", d.wrong_cot.text},
                             {"correct_reasoning", d.correct_cot.text},
                             {"answer", upper_label(d.gold)}}));
    }
    append_section(prompt, "test",
                   render_template(templates.revision_instruction,
                                   {{"sentence", sentence.text},
                                    {"aspect", aspect.surface},
                                    {"labels", label_list(scheme)},
                                    {"cot", centroid_cot.text}}));
    return prompt;
}

}  // namespace capital
