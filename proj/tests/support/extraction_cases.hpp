#pragma once

#include <optional>
#include <string_view>

#include "attreval/label.hpp"
#include "attreval/prompts.hpp"
#include "support/short_names.hpp"

namespace testsupport {

/// One response string and the label that must be extracted from it (or
/// nullopt when nothing should match).
struct ExtractionCase {
    std::string_view response;
    attreval::PromptVariant variant;
    std::optional<attreval::AttributionLabel> expected;
};

inline constexpr attreval::PromptVariant kAttr = attreval::PromptVariant::Attribution;
inline constexpr attreval::PromptVariant kFact = attreval::PromptVariant::FactChecking;
inline constexpr attreval::PromptVariant kNli = attreval::PromptVariant::Nli;
inline constexpr attreval::PromptVariant kSumm = attreval::PromptVariant::Summarization;

inline const ExtractionCase kExtractionCases[] = {
    // Clean verdict-first responses.
    {"Attributable.", kAttr, kA},
    {"Contradictory.", kAttr, kC},
    {"Extrapolatory.", kAttr, kE},
    {"attributable", kAttr, kA},
    {"EXTRAPOLATORY", kAttr, kE},
    // Verdict followed by a rationale, the shape the demos teach.
    {"Attributable. From the given reference, Pyotr Ilyich Tchaikovsky was the writer of "
     "\"Mazeppa\", who was born in 1840 as stated in the given claim.",
     kAttr, kA},
    {"Contradictory. The reference says that Mar del Plata is in the east part of Buenos "
     "Aires, so The Juan Carlos Castagnino Municipal Museum of Art is also in the east part "
     "of Buenos Aires, not southeast.",
     kAttr, kC},
    {"Extrapolatory. The answer to the question cannot be inferred from the given reference "
     "since the person \"Louis Joseph de Frances\" is not mentioned.",
     kAttr, kE},
    {"Attributable. The reference does provide an average salary of $132,147 for a software "
     "engineer working at Amazon, which is very close to the claim's figure of $131,930.",
     kAttr, kA},
    {"Extrapolatory. The reference provides an estimated release date for GTA 6 based on a "
     "legal filing from Microsoft and insider leaks, but it does not confirm an official "
     "announcement from Rockstar Games regarding the release date.",
     kAttr, kE},
    {"Attributable. The reference provides information that the official length of Norway's "
     "coastline, including fjords and islands, is 100,915 km. Therefore, the claim that "
     "Norway has a total of 100,915 km of coastline is supported by the Reference.",
     kAttr, kA},
    // Leading whitespace and punctuation before the verdict.
    {"  Attributable, clearly.", kAttr, kA},
    {"\n\nContradictory: the dates disagree.", kAttr, kC},
    {"**Extrapolatory** — no evidence either way.", kAttr, kE},
    {"\"Attributable\" is the verdict.", kAttr, kA},
    // Verdict buried mid-sentence (earliest mention wins).
    {"The claim is extrapolatory.", kAttr, kE},
    {"I would call this contradictory rather than attributable.", kAttr, kC},
    {"This looks attributable to the passage.", kAttr, kA},
    // Documented limitation: a negated verdict still parses as the verdict.
    {"Not attributable.", kAttr, kA},
    // No vocabulary term at all.
    {"The context does not mention the person.", kAttr, std::nullopt},
    {"", kAttr, std::nullopt},
    {"Supported.", kAttr, std::nullopt},  // wrong vocabulary for the variant
    // Fact-checking vocabulary.
    {"Supported.", kFact, kA},
    {"Refuted.", kFact, kC},
    {"Not Enough Information.", kFact, kE},
    {"REFUTED!", kFact, kC},
    {"The claim is supported by the evidence.", kFact, kA},
    {"There is not enough information to decide.", kFact, kE},
    {"I cannot tell.", kFact, std::nullopt},
    // NLI vocabulary.
    {"Entailment.", kNli, kA},
    {"Contradiction.", kNli, kC},
    {"Neutral.", kNli, kE},
    {"This is a contradiction of the premise.", kNli, kC},
    {"The premise gives an entailment here.", kNli, kA},
    {"neutral, leaning entailment", kNli, kE},
    // Summarization vocabulary, including the shorter verb forms.
    {"Supports.", kSumm, kA},
    {"Support.", kSumm, kA},
    {"Contradicts.", kSumm, kC},
    {"Contradict.", kSumm, kC},
    {"Not Enough Information.", kSumm, kE},
    {"The source text supports the summary.", kSumm, kA},
    {"The second sentence contradicts the summary.", kSumm, kC},
    {"There is not enough information, though parts support it.", kSumm, kE},
};

}  // namespace testsupport
