#include "attreval/tokenize.hpp"

#include <cctype>
#include <cstdint>

namespace attreval {

namespace {

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

// Decodes the codepoint starting at s[i]; advances len. Invalid sequences
// yield a sentinel so the raw byte is kept as token material.
constexpr uint32_t kInvalidByte = 0xFFFFFFFFu;

uint32_t decode(std::string_view s, size_t i, size_t& len) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
        len = 1;
        return c;
    }
    if ((c >> 5) == 0x6 && i + 1 < s.size() && is_continuation(s[i + 1])) {
        len = 2;
        return (uint32_t(c & 0x1F) << 6) | (s[i + 1] & 0x3F);
    }
    if ((c >> 4) == 0xE && i + 2 < s.size() && is_continuation(s[i + 1]) &&
        is_continuation(s[i + 2])) {
        len = 3;
        return (uint32_t(c & 0x0F) << 12) | (uint32_t(s[i + 1] & 0x3F) << 6) | (s[i + 2] & 0x3F);
    }
    if ((c >> 3) == 0x1E && i + 3 < s.size() && is_continuation(s[i + 1]) &&
        is_continuation(s[i + 2]) && is_continuation(s[i + 3])) {
        len = 4;
        return (uint32_t(c & 0x07) << 18) | (uint32_t(s[i + 1] & 0x3F) << 12) |
               (uint32_t(s[i + 2] & 0x3F) << 6) | (s[i + 3] & 0x3F);
    }
    len = 1;
    return kInvalidByte;
}

bool is_separator(uint32_t cp) {
    if (cp == kInvalidByte) return false;
    if (cp < 0x80) return !std::isalnum(static_cast<int>(cp));
    if (cp == 0x00A0 || cp == 0x00AB || cp == 0x00B7 || cp == 0x00BB) return true;
    if (cp >= 0x2000 && cp <= 0x206F) return true;
    if (cp >= 0x3000 && cp <= 0x303F) return true;
    return false;
}

}  // namespace

std::vector<TokenSpan> tokenize_spans(std::string_view text) {
    std::vector<TokenSpan> spans;
    TokenSpan current;
    bool open = false;
    size_t i = 0;
    while (i < text.size()) {
        size_t len = 0;
        uint32_t cp = decode(text, i, len);
        if (is_separator(cp)) {
            if (open) {
                current.end = i;
                spans.push_back(std::move(current));
                current = {};
                open = false;
            }
        } else {
            if (!open) {
                current.begin = i;
                open = true;
            }
            if (cp < 0x80) {
                current.token.push_back(
                    static_cast<char>(std::tolower(static_cast<int>(cp))));
            } else {
                current.token.append(text.substr(i, len));
            }
        }
        i += len;
    }
    if (open) {
        current.end = text.size();
        spans.push_back(std::move(current));
    }
    return spans;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    for (auto& span : tokenize_spans(text)) tokens.push_back(std::move(span.token));
    return tokens;
}

size_t find_token_subsequence(std::span<const std::string> needle,
                              std::span<const std::string> hay) {
    if (needle.empty() || needle.size() > hay.size()) return knpos;
    for (size_t i = 0; i + needle.size() <= hay.size(); ++i) {
        bool hit = true;
        for (size_t j = 0; j < needle.size(); ++j) {
            if (hay[i + j] != needle[j]) {
                hit = false;
                break;
            }
        }
        if (hit) return i;
    }
    return knpos;
}

size_t count_ws_tokens(std::string_view text) {
    size_t count = 0;
    bool in_token = false;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            in_token = false;
        } else if (!in_token) {
            in_token = true;
            ++count;
        }
    }
    return count;
}

}  // namespace attreval
