#include "attreval/prompts.hpp"

#include <cctype>

#include "attreval/errors.hpp"
#include "attreval/jsonl.hpp"
#include "attreval/tokenize.hpp"

namespace attreval {

namespace {

constexpr std::string_view kAttributionInstruction =
    "As an Attribution Validator, your task is to verify whether a given context can "
    "support the claim. A claim can be either a plain sentence or a question followed by "
    "its answer. Specifically, your response should clearly indicate the relationship: "
    "Attributable, Contradictory or Extrapolatory. A contradictory error occurs when you "
    "can infer that the answer contradicts the fact presented in the context, while an "
    "extrapolatory error means that you cannot infer the correctness of the answer based "
    "on the information provided in the context.";

constexpr std::string_view kFactCheckingInstruction =
    "Fact-check a claim based on the given evidence.\n"
    "Options: Supported, Refuted or Not Enough Information";

constexpr std::string_view kNliInstruction =
    "Read the following and determine if the hypothesis can be inferred from the premise.\n"
    "Options: Entailment, Contradiction, or Neutral";

constexpr std::string_view kSummarizationInstruction =
    "Read the following and determine whether the source text can support the summary.\n"
    "Options: Support, Contradicts, or Not Enough Information";

constexpr std::string_view kDemoHeader = "Here are some demonstration examples for you.";
constexpr std::string_view kDemoTrailer = "Now here is the example that needs your response:";
constexpr std::string_view kInputMarker = "### Input:";

}  // namespace

std::string_view to_string(PromptVariant variant) {
    switch (variant) {
        case PromptVariant::Attribution: return "attribution";
        case PromptVariant::FactChecking: return "fact_checking";
        case PromptVariant::Nli: return "nli";
        case PromptVariant::Summarization: return "summarization";
    }
    return "attribution";
}

std::optional<PromptVariant> try_parse_variant(std::string_view text) {
    std::string lowered;
    lowered.reserve(text.size());
    for (char ch : text) {
        lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    for (PromptVariant variant : kAllVariants) {
        if (lowered == to_string(variant)) return variant;
    }
    return std::nullopt;
}

PromptVariant parse_variant(std::string_view text) {
    if (auto variant = try_parse_variant(text)) return *variant;
    std::string known;
    for (PromptVariant variant : kAllVariants) {
        if (!known.empty()) known += ", ";
        known += to_string(variant);
    }
    throw Error("unknown prompt variant \"" + std::string(text) + "\"; expected one of: " + known);
}

std::string_view variant_instruction(PromptVariant variant) {
    switch (variant) {
        case PromptVariant::Attribution: return kAttributionInstruction;
        case PromptVariant::FactChecking: return kFactCheckingInstruction;
        case PromptVariant::Nli: return kNliInstruction;
        case PromptVariant::Summarization: return kSummarizationInstruction;
    }
    return kAttributionInstruction;
}

std::string_view claim_label(PromptVariant variant) {
    switch (variant) {
        case PromptVariant::Attribution: return "Claim";
        case PromptVariant::FactChecking: return "Claim";
        case PromptVariant::Nli: return "Hypothesis";
        case PromptVariant::Summarization: return "Summary";
    }
    return "Claim";
}

std::string_view context_label(PromptVariant variant) {
    switch (variant) {
        case PromptVariant::Attribution: return "Context";
        case PromptVariant::FactChecking: return "Evidence";
        case PromptVariant::Nli: return "Premise";
        case PromptVariant::Summarization: return "Source";
    }
    return "Context";
}

std::string_view variant_template(PromptVariant variant) {
    static const std::array<std::string, 4> templates = [] {
        std::array<std::string, 4> out;
        for (PromptVariant variant : kAllVariants) {
            std::string text = "### Instruction:\n";
            text += variant_instruction(variant);
            text += "\n\n### Input:\n";
            text += claim_label(variant);
            text += ": {claim}\n\n";
            text += context_label(variant);
            text += ": {context}\n\n### Response:";
            out[static_cast<size_t>(variant)] = std::move(text);
        }
        return out;
    }();
    return templates[static_cast<size_t>(variant)];
}

const FewShotSet& builtin_demos() {
    static const FewShotSet demos = {
        {
            R"__(Claim: In what year was the writer of the opera "Mazeppa" born? The writer of the opera "Mazeppa" was born in 1840.

Reference: Mazeppa, properly Mazepa, is an opera in three acts (six scenes) by Pyotr Ilyich Tchaikovsky. The libretto was written by Victor Burenin and is based on Pushkin's poem "Poltava". Pyotr Ilyich Tchaikovsky (25 April/7 May 1840 – 25 October/6 November 1893), often anglicized as Peter Ilich Tchaikovsky, was a Russian composer of the romantic period, some of whose works are among the most popular music in the classical repertoire. He was the first Russian composer whose music made a lasting impression internationally, bolstered by his appearances as a guest conductor in Europe and the United States. Tchaikovsky was honored in 1884, by Emperor Alexander III, and awarded a lifetime pension.)__",
            R"__(Attributable. From the given reference, Pyotr Ilyich Tchaikovsky was the writer of "Mazeppa", who was born in 1840 as stated in the given claim.)__",
        },
        {
            R"__(Claim: In what part of Buenos Aires Province is the city that has The Juan Carlos Castagnino Municipal Museum of Art located? It is located in the southeast part.

Reference: The Juan Carlos Castagnino Municipal Museum of Art is a museum of fine arts in Mar del Plata, Argentina. Mar del Plata is an Argentine city in the east part of Buenos Aires Province located on the coast of the Atlantic Ocean. It is the head of General Pueyrredón Partido. Mar del Plata is the second largest city in Buenos Aires Province. The name "Mar del Plata" has the meaning of "sea of the Silver region" or "adjoining sea to the (River) Silver region". Mar del Plata is one of the major fishing ports and the biggest seaside beach resort in Argentina.)__",
            R"__(Contradictory. The reference says that Mar del Plata is in the east part of Buenos Aires, so The Juan Carlos Castagnino Municipal Museum of Art is also in the east part of Buenos Aires, not southeast.)__",
        },
        {
            R"__(Claim: In what year was Louis Joseph de Frances's mother born? Louis Joseph de Frances's mother was born in 1755.

Reference: Lakshman Joseph de Saram is a film composer and classical musician. Born in Colombo, Sri Lanka and educated at the Royal College, Colombo, the High School of Performing Arts, Manhattan School of Music and Juilliard Pre-College in New York City, Joseph de Saram is influential in the music of South Asian art cinema, having scored many international award-winning films like 'Between Two Worlds' and 'Akasa Kusum.' His best-known score is to the 2012 film "Bel Ami". Joseph de Saram is also artistic director of The Chamber Music Society of Colombo. Louis Joseph de Lorraine "Duke of Guise" and Duke of Angoulême, (7 August 1650 – 30 July 1671) was the only son of Louis, Duke of Joyeuse and Marie Françoise de Valois, the only daughter of Louis-Emmanuel d'Angoulême, Count of Alès, Governor of Provence and son of Charles de Valois Duke of Angoulême, a bastard of Charles IX of France.)__",
            R"__(Extrapolatory. The answer to the question cannot be inferred from the given reference since the person "Louis Joseph de Frances" is not mentioned. We also cannot find any evidence in the Reference which contradicts with the provided answer.)__",
        },
    };
    return demos;
}

namespace {

std::string_view trim(std::string_view text) {
    size_t begin = 0;
    while (begin < text.size() && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    size_t end = text.size();
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

}  // namespace

std::string render_demos(const FewShotSet& demos) {
    std::string out;
    for (size_t i = 0; i < demos.size(); ++i) {
        if (i > 0) out += "\n\n-\n\n";
        out += "### Input:\n";
        out += demos[i].input;
        out += "\n\n### Response:\n";
        out += demos[i].response;
    }
    return out;
}

FewShotSet parse_demos(std::string_view text) {
    // Split on lines that contain exactly "-".
    std::vector<std::string_view> chunks;
    size_t chunk_begin = 0;
    size_t line_begin = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::string_view line = trim(text.substr(line_begin, i - line_begin));
            if (line == "-") {
                chunks.push_back(text.substr(chunk_begin, line_begin - chunk_begin));
                chunk_begin = (i == text.size()) ? i : i + 1;
            }
            line_begin = i + 1;
        }
    }
    chunks.push_back(text.substr(chunk_begin));

    FewShotSet demos;
    for (std::string_view chunk : chunks) {
        if (trim(chunk).empty()) continue;
        size_t input_pos = chunk.find(kInputMarker);
        size_t response_pos = chunk.find("### Response:");
        if (input_pos == std::string_view::npos || response_pos == std::string_view::npos ||
            response_pos < input_pos) {
            throw FormatError("demo fixture: each demo needs \"### Input:\" then \"### Response:\"");
        }
        FewShotDemo demo;
        demo.input = trim(chunk.substr(input_pos + kInputMarker.size(),
                                       response_pos - input_pos - kInputMarker.size()));
        demo.response = trim(chunk.substr(response_pos + std::string_view("### Response:").size()));
        demos.push_back(std::move(demo));
    }
    return demos;
}

FewShotSet load_demos_file(const std::filesystem::path& path) {
    return parse_demos(read_text_file(path));
}

std::string prompt_claim(const AttributionExample& example) {
    if (example.query.empty()) return example.answer;
    return example.query + " " + example.answer;
}

namespace {

// Single left-to-right pass; substituted text is never rescanned.
std::string substitute(std::string_view scaffold, std::string_view claim,
                       std::string_view context) {
    std::string out;
    out.reserve(scaffold.size() + claim.size() + context.size());
    size_t i = 0;
    while (i < scaffold.size()) {
        if (scaffold.compare(i, 7, "{claim}") == 0) {
            out += claim;
            i += 7;
        } else if (scaffold.compare(i, 9, "{context}") == 0) {
            out += context;
            i += 9;
        } else {
            out.push_back(scaffold[i]);
            ++i;
        }
    }
    return out;
}

size_t count_occurrences(std::string_view text, std::string_view needle) {
    size_t count = 0;
    for (size_t pos = text.find(needle); pos != std::string_view::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

std::vector<std::string_view> split_ws(std::string_view text) {
    std::vector<std::string_view> tokens;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        size_t begin = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > begin) tokens.push_back(text.substr(begin, i - begin));
    }
    return tokens;
}

}  // namespace

std::string build_prompt(const AttributionExample& example, PromptVariant variant,
                         const PromptOptions& options) {
    std::string_view scaffold =
        options.template_override.empty() ? variant_template(variant) : options.template_override;
    if (scaffold.find("{claim}") == std::string_view::npos ||
        count_occurrences(scaffold, "{context}") != 1) {
        throw Error("prompt template must contain {claim} and exactly one {context}");
    }
    static const FewShotSet kNoDemos;
    const FewShotSet& demos = options.demos ? *options.demos : kNoDemos;
    size_t input_pos = scaffold.find(kInputMarker);
    if (!demos.empty() && input_pos == std::string_view::npos) {
        throw Error("prompt template needs an \"### Input:\" marker to take demonstrations");
    }

    const std::string claim = prompt_claim(example);
    auto render = [&](size_t shots, std::string_view reference) {
        if (shots == 0) return substitute(scaffold, claim, reference);
        std::string assembled(scaffold.substr(0, input_pos));
        assembled += kDemoHeader;
        assembled += "\n\n";
        for (size_t i = 0; i < shots; ++i) {
            assembled += "### Input:\n";
            assembled += demos[i].input;
            assembled += "\n\n### Response:\n";
            assembled += demos[i].response;
            assembled += "\n\n-\n\n";
        }
        assembled += kDemoTrailer;
        assembled += "\n\n";
        assembled += scaffold.substr(input_pos);
        return substitute(assembled, claim, reference);
    };

    std::string full = render(demos.size(), example.reference);
    if (count_ws_tokens(full) <= options.budget_tokens) return full;

    const auto reference_tokens = split_ws(example.reference);
    for (size_t shots = demos.size() + 1; shots-- > 0;) {
        const size_t base = count_ws_tokens(render(shots, ""));
        if (base > options.budget_tokens) continue;
        const size_t keep = options.budget_tokens - base;
        if (keep >= reference_tokens.size()) return render(shots, example.reference);
        std::string truncated;
        for (size_t i = 0; i < keep; ++i) {
            if (i > 0) truncated.push_back(' ');
            truncated += reference_tokens[i];
        }
        return render(shots, truncated);
    }
    throw BudgetError("prompt budget of " + std::to_string(options.budget_tokens) +
                      " tokens cannot hold the instruction and claim");
}

}  // namespace attreval
