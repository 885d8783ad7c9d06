#include "attreval/evaluator.hpp"

#include <cctype>

namespace attreval {

namespace {

struct VocabTerm {
    std::string_view term;  // lowercase
    AttributionLabel label;
};

std::span<const VocabTerm> vocabulary(PromptVariant variant) {
    static constexpr VocabTerm kAttribution[] = {
        {"attributable", AttributionLabel::Attributable},
        {"contradictory", AttributionLabel::Contradictory},
        {"extrapolatory", AttributionLabel::Extrapolatory},
    };
    static constexpr VocabTerm kFactChecking[] = {
        {"supported", AttributionLabel::Attributable},
        {"refuted", AttributionLabel::Contradictory},
        {"not enough information", AttributionLabel::Extrapolatory},
    };
    static constexpr VocabTerm kNli[] = {
        {"entailment", AttributionLabel::Attributable},
        {"contradiction", AttributionLabel::Contradictory},
        {"neutral", AttributionLabel::Extrapolatory},
    };
    static constexpr VocabTerm kSummarization[] = {
        {"supports", AttributionLabel::Attributable},
        {"support", AttributionLabel::Attributable},
        {"contradicts", AttributionLabel::Contradictory},
        {"contradict", AttributionLabel::Contradictory},
        {"not enough information", AttributionLabel::Extrapolatory},
    };
    switch (variant) {
        case PromptVariant::Attribution: return kAttribution;
        case PromptVariant::FactChecking: return kFactChecking;
        case PromptVariant::Nli: return kNli;
        case PromptVariant::Summarization: return kSummarization;
    }
    return kAttribution;
}

std::string ascii_lower(std::string_view text) {
    std::string lowered;
    lowered.reserve(text.size());
    for (char ch : text) {
        lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    return lowered;
}

}  // namespace

std::optional<AttributionLabel> extract_label(std::string_view response, PromptVariant variant) {
    const std::string lowered = ascii_lower(response);
    const auto vocab = vocabulary(variant);

    size_t start = 0;
    while (start < lowered.size()) {
        unsigned char ch = static_cast<unsigned char>(lowered[start]);
        if (!std::isspace(ch) && !std::ispunct(ch)) break;
        ++start;
    }
    std::optional<AttributionLabel> rule1;
    size_t rule1_len = 0;
    for (const auto& entry : vocab) {
        if (lowered.compare(start, entry.term.size(), entry.term) == 0 &&
            entry.term.size() > rule1_len) {
            rule1 = entry.label;
            rule1_len = entry.term.size();
        }
    }
    if (rule1) return rule1;

    std::optional<AttributionLabel> rule2;
    size_t best_pos = std::string::npos;
    size_t best_len = 0;
    for (const auto& entry : vocab) {
        size_t pos = lowered.find(entry.term);
        if (pos == std::string::npos) continue;
        if (pos < best_pos || (pos == best_pos && entry.term.size() > best_len)) {
            rule2 = entry.label;
            best_pos = pos;
            best_len = entry.term.size();
        }
    }
    return rule2;
}

std::vector<Prediction> evaluate_batch(std::span<const AttributionExample> examples,
                                       GenerationClient& client, const EvalOptions& options) {
    PromptOptions prompt_options;
    prompt_options.budget_tokens = options.budget_tokens;
    prompt_options.demos = options.demos;
    prompt_options.template_override = options.template_override;

    std::vector<GenerationRequest> requests;
    requests.reserve(examples.size());
    for (const auto& example : examples) {
        GenerationRequest request;
        request.prompt = build_prompt(example, options.variant, prompt_options);
        request.max_new_tokens = options.max_new_tokens;
        request.temperature = options.temperature;
        requests.push_back(std::move(request));
    }

    const auto results = complete_batch(client, requests, options.max_concurrency);
    const std::string model_id = options.model_id.empty() ? client.model_id() : options.model_id;
    const int shots = options.demos ? static_cast<int>(options.demos->size()) : 0;

    std::vector<Prediction> predictions;
    predictions.reserve(examples.size());
    for (size_t i = 0; i < examples.size(); ++i) {
        Prediction prediction;
        prediction.example_id = examples[i].id;
        prediction.prompt_variant = options.variant;
        prediction.model_id = model_id;
        prediction.shots = shots;
        if (results[i].ok) {
            prediction.raw_response = results[i].text;
            prediction.predicted = extract_label(results[i].text, options.variant);
        } else {
            prediction.error = results[i].error;
        }
        predictions.push_back(std::move(prediction));
    }
    return predictions;
}

}  // namespace attreval
