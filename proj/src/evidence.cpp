#include "attreval/evidence.hpp"

#include <unordered_set>

#include "attreval/tokenize.hpp"

namespace attreval {

bool contains_answer(const Passage& passage, std::span<const std::string> answers) {
    auto passage_tokens = tokenize(passage.text);
    for (const auto& answer : answers) {
        auto answer_tokens = tokenize(answer);
        if (answer_tokens.empty()) continue;
        if (find_token_subsequence(answer_tokens, passage_tokens) != knpos) return true;
    }
    return false;
}

double overlap_ratio(const Passage& passage, std::string_view answer) {
    auto answer_tokens = tokenize(answer);
    if (answer_tokens.empty()) return 0.0;
    std::unordered_set<std::string> unique(answer_tokens.begin(), answer_tokens.end());
    std::unordered_set<std::string> in_passage;
    for (auto& token : tokenize(passage.text)) {
        if (unique.count(token)) in_passage.insert(std::move(token));
    }
    return static_cast<double>(in_passage.size()) / static_cast<double>(unique.size());
}

std::optional<Passage> select_positive(const Bm25Index& index, std::string_view question,
                                       std::span<const std::string> answers, double min_overlap) {
    for (const auto& hit : index.search(question, index.num_passages())) {
        if (!contains_answer(hit.passage, answers)) continue;
        for (const auto& answer : answers) {
            if (overlap_ratio(hit.passage, answer) >= min_overlap) return hit.passage;
        }
    }
    return std::nullopt;
}

std::optional<Passage> select_negative(const Bm25Index& index, std::string_view question,
                                       std::span<const std::string> answers, size_t depth) {
    for (const auto& hit : index.search(question, depth)) {
        if (!contains_answer(hit.passage, answers)) return hit.passage;
    }
    return std::nullopt;
}

}  // namespace attreval
