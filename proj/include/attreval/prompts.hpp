#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "attreval/example.hpp"

namespace attreval {

/// Prompt wording presented to the judged model. All four variants share one
/// layout; they differ in instruction text and input field names.
enum class PromptVariant { Attribution, FactChecking, Nli, Summarization };

inline constexpr std::array<PromptVariant, 4> kAllVariants = {
    PromptVariant::Attribution,
    PromptVariant::FactChecking,
    PromptVariant::Nli,
    PromptVariant::Summarization,
};

/// "attribution", "fact_checking", "nli", "summarization".
std::string_view to_string(PromptVariant variant);
std::optional<PromptVariant> try_parse_variant(std::string_view text);
PromptVariant parse_variant(std::string_view text);

/// The instruction paragraph, without scaffolding.
std::string_view variant_instruction(PromptVariant variant);

/// Full prompt template with {claim} and {context} placeholders, ending with
/// "### Response:".
std::string_view variant_template(PromptVariant variant);

std::string_view claim_label(PromptVariant variant);    // Claim / Hypothesis / Summary
std::string_view context_label(PromptVariant variant);  // Context / Evidence / Premise / Source

/// One worked demonstration: the text under "### Input:" and the text under
/// "### Response:".
struct FewShotDemo {
    std::string input;
    std::string response;

    bool operator==(const FewShotDemo&) const = default;
};

using FewShotSet = std::vector<FewShotDemo>;

/// The three demonstrations shipped with the tool, in fixed order:
/// Attributable, Contradictory, Extrapolatory.
const FewShotSet& builtin_demos();

/// Plain-text fixture format: demos joined by lines containing only "-";
/// each demo is "### Input:" text then "### Response:" text.
std::string render_demos(const FewShotSet& demos);
FewShotSet parse_demos(std::string_view text);
FewShotSet load_demos_file(const std::filesystem::path& path);

inline constexpr size_t kDefaultBudgetTokens = 2048;

struct PromptOptions {
    /// Whitespace-token cap for the rendered prompt.
    size_t budget_tokens = kDefaultBudgetTokens;
    /// Demonstrations to insert, first `shots` of them; null means zero-shot.
    const FewShotSet* demos = nullptr;
    /// Replaces the variant template. Must contain {claim} and exactly one
    /// {context}; must contain "### Input:" when demos are used.
    std::string_view template_override = {};
};

/// The claim line: query and answer joined by one space, or the answer alone
/// when the query is empty.
std::string prompt_claim(const AttributionExample& example);

/// Renders the full prompt for one example. When the whitespace-token count
/// exceeds the budget, the reference is tail-truncated first, then demos are
/// dropped last-first; the instruction and claim are never cut. Throws
/// BudgetError when even those cannot fit.
std::string build_prompt(const AttributionExample& example, PromptVariant variant,
                         const PromptOptions& options = {});

}  // namespace attreval
