#include "attreval/simulate.hpp"

#include <cctype>
#include <cmath>
#include <unordered_set>

#include "attreval/errors.hpp"
#include "attreval/evidence.hpp"
#include "attreval/rng.hpp"
#include "attreval/tokenize.hpp"

namespace attreval {

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::Attributable: return "attributable";
        case Strategy::AnswerSwap: return "contradictory_answer_swap";
        case Strategy::ContextSwap: return "contradictory_context_swap";
        case Strategy::Extrapolatory: return "extrapolatory";
    }
    return "attributable";
}

std::vector<QaRecord> read_qa_jsonl(const std::filesystem::path& path, IoMode mode) {
    std::vector<QaRecord> records;
    std::unordered_set<std::string> seen;
    for (const auto& row : read_jsonl(path)) {
        check_known_fields(row, {"id", "question", "answers", "positive_context", "source"}, mode,
                           "qa record");
        QaRecord record;
        auto get_string = [&](const char* key, bool required) -> std::string {
            auto it = row.find(key);
            if (it == row.end() || it->is_null()) {
                if (required) {
                    throw FormatError(path.string() + ": qa record missing field \"" + key + "\"");
                }
                return {};
            }
            if (!it->is_string()) {
                throw FormatError(path.string() + ": qa record field \"" + std::string(key) +
                                  "\" must be a string");
            }
            return it->get<std::string>();
        };
        record.id = get_string("id", true);
        record.question = get_string("question", true);
        auto answers = row.find("answers");
        if (answers == row.end() || !answers->is_array()) {
            throw FormatError(path.string() + ": qa record needs an \"answers\" array");
        }
        for (const auto& answer : *answers) {
            if (!answer.is_string()) {
                throw FormatError(path.string() + ": answers must be strings");
            }
            record.answers.push_back(answer.get<std::string>());
        }
        record.positive_context = get_string("positive_context", true);
        record.source = get_string("source", false);
        if (!seen.insert(record.id).second) {
            throw FormatError(path.string() + ": duplicate qa record id \"" + record.id + "\"");
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<std::string> validate_qa_record(const QaRecord& record) {
    std::vector<std::string> violations;
    if (record.id.empty()) violations.push_back("id is empty");
    if (record.question.empty()) violations.push_back("question is empty");
    bool has_answer = false;
    for (const auto& answer : record.answers) {
        if (!answer.empty()) {
            has_answer = true;
            break;
        }
    }
    if (!has_answer) violations.push_back("no non-empty answer");
    if (record.positive_context.empty()) violations.push_back("positive_context is empty");
    return violations;
}

std::string qa_model_prompt(std::string_view context, std::string_view question) {
    std::string prompt = "Context: ";
    prompt += context;
    prompt += "\nBased on Context, ";
    prompt += question;
    return prompt;
}

std::string substitution_prompt(std::string_view input) {
    std::string prompt =
        "Please provide a related term or substitution for the given input, which should be "
        "different from the input.\n"
        "Input: Biden; Output: Obama\n"
        "Input: 1949; Output: 1358\n"
        "Input: University of Maryland; Output: University of Cambridge\n"
        "Input: 09/12/2014; Output: 03/30/2008\n"
        "Input: $431; Output: $769;\n"
        "Input: ";
    prompt += input;
    prompt += "; Output: ";
    return prompt;
}

std::string random_span_prompt(std::string_view context) {
    std::string prompt = "Extract a phrase from the given passage.\nPassage: ";
    prompt += context;
    return prompt;
}

std::string longify_prompt(std::string_view question, std::string_view answer) {
    std::string prompt = "Convert a given question and answer pair into plain sentences. ";
    prompt += question;
    prompt += " ";
    prompt += answer;
    return prompt;
}

namespace {

std::string trim_copy(std::string_view text) {
    size_t begin = 0;
    while (begin < text.size() && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    size_t end = text.size();
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return std::string(text.substr(begin, end - begin));
}

AttributionExample base_example(const QaRecord& record, Strategy strategy) {
    AttributionExample example;
    example.id = record.id;
    example.query = record.question;
    example.source = record.source.empty() ? "qa" : record.source;
    example.meta["strategy"] = to_string(strategy);
    example.meta["source_id"] = record.id;
    return example;
}

std::string first_answer(const QaRecord& record) {
    for (const auto& answer : record.answers) {
        if (!answer.empty()) return answer;
    }
    return {};
}

/// Rewrites `answer` as a sentence when configured; falls back to the
/// original on an empty generation.
std::string maybe_longify(const QaRecord& record, std::string answer, GenerationClient* client,
                          const SimulationConfig& config, AttributionExample& example) {
    if (!config.longify) return answer;
    if (client == nullptr) throw Error("longify requires a generation client");
    GenerationRequest request;
    request.prompt = longify_prompt(record.question, answer);
    request.max_new_tokens = config.max_new_tokens;
    std::string text = trim_copy(client->complete(request));
    example.meta["longified"] = "true";
    if (text.empty()) {
        example.meta["longify_fallback"] = "true";
        return answer;
    }
    return text;
}

std::vector<std::vector<std::string>> gold_token_sets(const QaRecord& record) {
    std::vector<std::vector<std::string>> sets;
    for (const auto& answer : record.answers) {
        auto tokens = tokenize(answer);
        if (!tokens.empty()) sets.push_back(std::move(tokens));
    }
    return sets;
}

bool matches_any(const std::vector<std::vector<std::string>>& sets,
                 const std::vector<std::string>& tokens) {
    for (const auto& set : sets) {
        if (set == tokens) return true;
    }
    return false;
}

constexpr std::string_view kSubstituterNames[3] = {"qa_model", "substitution", "random_span"};

}  // namespace

StrategyOutcome make_attributable(const QaRecord& record, GenerationClient* client,
                                  const SimulationConfig& config) {
    AttributionExample example = base_example(record, Strategy::Attributable);
    example.label = AttributionLabel::Attributable;
    example.reference = record.positive_context;
    example.answer = maybe_longify(record, first_answer(record), client, config, example);
    return {std::move(example), {}};
}

StrategyOutcome make_answer_swap(const QaRecord& record, GenerationClient& client,
                                 const SimulationConfig& config) {
    Rng rng = Rng::derive(config.seed, "swap/" + record.id);
    const auto golds = gold_token_sets(record);
    for (int attempt = 0; attempt < config.retry_budget; ++attempt) {
        const size_t which = rng.pick_index(3);
        GenerationRequest request;
        switch (which) {
            case 0: request.prompt = qa_model_prompt(record.positive_context, record.question); break;
            case 1: request.prompt = substitution_prompt(first_answer(record)); break;
            default: request.prompt = random_span_prompt(record.positive_context); break;
        }
        request.max_new_tokens = config.max_new_tokens;
        const std::string candidate = trim_copy(client.complete(request));
        const auto candidate_tokens = tokenize(candidate);
        if (candidate_tokens.empty() || matches_any(golds, candidate_tokens)) continue;

        AttributionExample example = base_example(record, Strategy::AnswerSwap);
        example.label = AttributionLabel::Contradictory;
        example.reference = record.positive_context;
        example.meta["substituter"] = kSubstituterNames[which];
        example.meta["gold_answer"] = first_answer(record);
        example.answer = maybe_longify(record, candidate, &client, config, example);
        return {std::move(example), {}};
    }
    return {std::nullopt, "answer substitution exhausted retry budget"};
}

StrategyOutcome make_context_swap(const QaRecord& record, GenerationClient& client,
                                  const SimulationConfig& config) {
    const auto spans = tokenize_spans(record.positive_context);
    std::vector<std::string> context_tokens;
    context_tokens.reserve(spans.size());
    for (const auto& span : spans) context_tokens.push_back(span.token);

    std::string matched_gold;
    size_t span_begin = 0;
    size_t span_end = 0;
    bool found = false;
    for (const auto& answer : record.answers) {
        const auto answer_tokens = tokenize(answer);
        if (answer_tokens.empty()) continue;
        const size_t pos = find_token_subsequence(answer_tokens, context_tokens);
        if (pos == knpos) continue;
        matched_gold = answer;
        span_begin = spans[pos].begin;
        span_end = spans[pos + answer_tokens.size() - 1].end;
        found = true;
        break;
    }
    if (!found) return {std::nullopt, "no gold answer span in context"};

    const std::string span_text =
        record.positive_context.substr(span_begin, span_end - span_begin);
    const auto span_tokens = tokenize(span_text);
    const auto golds = gold_token_sets(record);

    Rng rng = Rng::derive(config.seed, "span/" + record.id);
    for (int attempt = 0; attempt < config.retry_budget; ++attempt) {
        const size_t which = rng.pick_index(3);
        GenerationRequest request;
        switch (which) {
            case 0: request.prompt = qa_model_prompt(record.positive_context, record.question); break;
            case 1: request.prompt = substitution_prompt(span_text); break;
            default: request.prompt = random_span_prompt(record.positive_context); break;
        }
        request.max_new_tokens = config.max_new_tokens;
        const std::string candidate = trim_copy(client.complete(request));
        const auto candidate_tokens = tokenize(candidate);
        if (candidate_tokens.empty() || candidate_tokens == span_tokens ||
            matches_any(golds, candidate_tokens)) {
            continue;
        }

        AttributionExample example = base_example(record, Strategy::ContextSwap);
        example.label = AttributionLabel::Contradictory;
        example.reference = record.positive_context.substr(0, span_begin) + candidate +
                            record.positive_context.substr(span_end);
        example.meta["substituter"] = kSubstituterNames[which];
        example.meta["replaced_span"] = span_text;
        example.meta["candidate"] = candidate;
        example.answer = maybe_longify(record, matched_gold, &client, config, example);
        return {std::move(example), {}};
    }
    return {std::nullopt, "span substitution exhausted retry budget"};
}

StrategyOutcome make_extrapolatory(const QaRecord& record, const Bm25Index& index,
                                   GenerationClient* client, const SimulationConfig& config) {
    const auto negative =
        select_negative(index, record.question, record.answers, config.negative_depth);
    if (!negative) return {std::nullopt, "no answer-free passage in top results"};

    AttributionExample example = base_example(record, Strategy::Extrapolatory);
    example.label = AttributionLabel::Extrapolatory;
    example.reference = negative->text;
    example.meta["negative_doc_id"] = negative->doc_id;

    std::string answer = first_answer(record);
    if (config.answer_from_model) {
        if (client == nullptr) throw Error("answer_from_model requires a generation client");
        GenerationRequest request;
        request.prompt = qa_model_prompt(record.positive_context, record.question);
        request.max_new_tokens = config.max_new_tokens;
        const std::string text = trim_copy(client->complete(request));
        if (!text.empty()) {
            answer = text;
            example.meta["answer_source"] = "model";
        } else {
            example.meta["answer_source"] = "gold";
        }
    }
    example.answer = maybe_longify(record, answer, client, config, example);
    return {std::move(example), {}};
}

namespace {

Strategy pick_strategy(const std::array<double, 4>& mix, double draw) {
    double acc = 0.0;
    int last_positive = -1;
    for (int i = 0; i < 4; ++i) {
        if (mix[static_cast<size_t>(i)] <= 0.0) continue;
        last_positive = i;
        acc += mix[static_cast<size_t>(i)];
        if (draw < acc) return static_cast<Strategy>(i);
    }
    // Floating-point edge: the draw landed beyond the accumulated sum.
    return static_cast<Strategy>(last_positive);
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

SimulationResult simulate_dataset(std::span<const QaRecord> records, const Bm25Index* index,
                                  GenerationClient* client, const SimulationConfig& config) {
    double sum = 0.0;
    for (double weight : config.class_mix) {
        if (weight < 0.0) throw Error("class_mix weights must be non-negative");
        sum += weight;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error("class_mix must sum to 1");
    if (config.retry_budget < 1) throw Error("retry_budget must be at least 1");
    if (config.class_mix[3] > 0.0 && index == nullptr) {
        throw Error("extrapolatory strategy requires a passage index");
    }
    const bool needs_client = config.class_mix[1] > 0.0 || config.class_mix[2] > 0.0 ||
                              config.longify ||
                              (config.answer_from_model && config.class_mix[3] > 0.0);
    if (needs_client && client == nullptr) {
        throw Error("the configured strategies require a generation client");
    }

    SimulationResult result;
    for (const auto& record : records) {
        const auto violations = validate_qa_record(record);
        if (!violations.empty()) {
            result.drops.push_back({record.id, join(violations, "; ")});
            continue;
        }
        if (config.min_overlap > 0.0) {
            const Passage context{record.id, record.positive_context};
            double best = 0.0;
            for (const auto& answer : record.answers) {
                best = std::max(best, overlap_ratio(context, answer));
            }
            if (best < config.min_overlap) {
                result.drops.push_back({record.id, "positive context overlap below threshold"});
                continue;
            }
        }

        Rng assign = Rng::derive(config.seed, "assign/" + record.id);
        const Strategy strategy = pick_strategy(config.class_mix, assign.next_double());

        StrategyOutcome outcome;
        try {
            switch (strategy) {
                case Strategy::Attributable:
                    outcome = make_attributable(record, client, config);
                    break;
                case Strategy::AnswerSwap:
                    outcome = make_answer_swap(record, *client, config);
                    break;
                case Strategy::ContextSwap:
                    outcome = make_context_swap(record, *client, config);
                    break;
                case Strategy::Extrapolatory:
                    outcome = make_extrapolatory(record, *index, client, config);
                    break;
            }
        } catch (const ClientError& err) {
            throw ClientError("record \"" + record.id + "\": " + err.what());
        }

        if (outcome.example) {
            ++result.emitted[static_cast<size_t>(strategy)];
            result.examples.push_back(std::move(*outcome.example));
        } else {
            result.drops.push_back(
                {record.id, std::string(to_string(strategy)) + ": " + outcome.drop_reason});
        }
    }
    return result;
}

}  // namespace attreval
