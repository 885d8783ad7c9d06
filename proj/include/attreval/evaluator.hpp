#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "attreval/client.hpp"
#include "attreval/example.hpp"
#include "attreval/prediction.hpp"
#include "attreval/prompts.hpp"

namespace attreval {

/// Maps a free-form model response to one of the three labels using the
/// variant's option vocabulary. Rule 1: the response starts (ignoring
/// whitespace and punctuation) with a vocabulary term. Rule 2: otherwise the
/// earliest vocabulary term anywhere in the response wins; ties at the same
/// position go to the longest term. Returns nullopt when no term occurs.
/// Matching is by case-insensitive prefix, so "Not attributable" parses as
/// Attributable; prose rationales should follow the verdict, not negate it.
std::optional<AttributionLabel> extract_label(std::string_view response, PromptVariant variant);

struct EvalOptions {
    PromptVariant variant = PromptVariant::Attribution;
    const FewShotSet* demos = nullptr;  // null or empty = zero-shot
    size_t budget_tokens = kDefaultBudgetTokens;
    int max_new_tokens = 512;
    double temperature = 0.0;
    int max_concurrency = 1;
    std::string model_id;            // empty = take the client's
    std::string template_override;   // empty = builtin variant template
};

/// Prompts the client once per example and extracts labels. Results align
/// with the input order. A failed endpoint call yields a prediction with no
/// label and an error note instead of aborting the batch.
std::vector<Prediction> evaluate_batch(std::span<const AttributionExample> examples,
                                       GenerationClient& client, const EvalOptions& options);

}  // namespace attreval
