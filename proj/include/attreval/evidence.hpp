#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "attreval/bm25.hpp"

namespace attreval {

/// True when any gold answer occurs in the passage as a contiguous run of
/// normalized tokens. Answers that tokenize to nothing never match.
bool contains_answer(const Passage& passage, std::span<const std::string> answers);

/// Fraction of the answer's unique normalized tokens found anywhere in the
/// passage. 0 when the answer has no tokens.
double overlap_ratio(const Passage& passage, std::string_view answer);

/// Highest-ranked passage for `question` that contains a gold answer and has
/// overlap_ratio >= min_overlap for at least one answer.
std::optional<Passage> select_positive(const Bm25Index& index, std::string_view question,
                                       std::span<const std::string> answers, double min_overlap);

/// First of the top-`depth` passages for `question` that contains no gold
/// answer; nullopt when every scored passage contains one or the search
/// comes back empty.
std::optional<Passage> select_negative(const Bm25Index& index, std::string_view question,
                                       std::span<const std::string> answers, size_t depth);

}  // namespace attreval
