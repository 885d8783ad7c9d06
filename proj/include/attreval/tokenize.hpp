#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace attreval {

/// Normalizing tokenizer used for retrieval, evidence checks, and answer
/// comparison. ASCII letters are lowercased; tokens are maximal runs of
/// token characters. Separators are ASCII non-alphanumerics plus these
/// Unicode blocks: U+00A0, U+00AB, U+00B7, U+00BB, U+2000-U+206F,
/// U+3000-U+303F. Every other non-ASCII codepoint is a token character and
/// is kept byte-for-byte. Bytes that are not valid UTF-8 are treated as
/// token characters.
std::vector<std::string> tokenize(std::string_view text);

/// A token plus its [begin, end) byte range in the original text.
struct TokenSpan {
    std::string token;
    size_t begin = 0;
    size_t end = 0;

    bool operator==(const TokenSpan&) const = default;
};

/// Same segmentation as tokenize(), with source offsets for span surgery.
std::vector<TokenSpan> tokenize_spans(std::string_view text);

inline constexpr size_t knpos = static_cast<size_t>(-1);

/// Index in `hay` where `needle` first occurs as a contiguous run, or knpos.
/// An empty needle never matches.
size_t find_token_subsequence(std::span<const std::string> needle,
                              std::span<const std::string> hay);

/// Number of whitespace-delimited chunks; the unit of prompt budgets.
size_t count_ws_tokens(std::string_view text);

}  // namespace attreval
