#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "attreval/bm25.hpp"
#include "attreval/client.hpp"
#include "attreval/example.hpp"
#include "attreval/jsonl.hpp"

namespace attreval {

/// One QA source row used to manufacture labeled examples. The positive
/// context is expected to contain a gold answer.
struct QaRecord {
    std::string id;
    std::string question;
    std::vector<std::string> answers;
    std::string positive_context;
    std::string source;

    bool operator==(const QaRecord&) const = default;
};

/// JSONL fields: {"id","question","answers","positive_context","source"}.
/// Duplicate ids are rejected; output example ids reuse the input ids.
std::vector<QaRecord> read_qa_jsonl(const std::filesystem::path& path, IoMode mode);

/// Structural problems that make a record unusable for any strategy.
std::vector<std::string> validate_qa_record(const QaRecord& record);

enum class Strategy { Attributable, AnswerSwap, ContextSwap, Extrapolatory };

/// "attributable", "contradictory_answer_swap", "contradictory_context_swap",
/// "extrapolatory".
std::string_view to_string(Strategy strategy);

struct SimulationConfig {
    uint64_t seed = 0;
    /// Probability of each strategy, ordered as the Strategy enum; must be
    /// non-negative and sum to 1.
    std::array<double, 4> class_mix = {0.25, 0.25, 0.25, 0.25};
    /// Candidate attempts per record before the record is dropped.
    int retry_budget = 4;
    /// Rewrite short answers into full sentences via the generator.
    bool longify = false;
    /// Ask the generator to answer the question for extrapolatory records
    /// instead of reusing the gold answer.
    bool answer_from_model = false;
    /// Minimum overlap_ratio between some gold answer and the positive
    /// context; records below it are dropped. 0 disables the filter.
    double min_overlap = 0.0;
    /// Passages scanned when hunting an answer-free negative.
    size_t negative_depth = 100;
    /// Generation cap for substitution and longify calls.
    int max_new_tokens = 64;
};

/// Prompts sent to the substitution generator, one per candidate strategy.
std::string qa_model_prompt(std::string_view context, std::string_view question);
std::string substitution_prompt(std::string_view input);
std::string random_span_prompt(std::string_view context);
/// Prompt that rewrites a short answer into a sentence.
std::string longify_prompt(std::string_view question, std::string_view answer);

/// Result of one strategy on one record: an example, or a reason it was
/// skipped.
struct StrategyOutcome {
    std::optional<AttributionExample> example;
    std::string drop_reason;
};

StrategyOutcome make_attributable(const QaRecord& record, GenerationClient* client,
                                  const SimulationConfig& config);
StrategyOutcome make_answer_swap(const QaRecord& record, GenerationClient& client,
                                 const SimulationConfig& config);
StrategyOutcome make_context_swap(const QaRecord& record, GenerationClient& client,
                                  const SimulationConfig& config);
StrategyOutcome make_extrapolatory(const QaRecord& record, const Bm25Index& index,
                                   GenerationClient* client, const SimulationConfig& config);

struct SimulationResult {
    std::vector<AttributionExample> examples;  // input order preserved
    std::vector<DropRecord> drops;
    std::array<size_t, 4> emitted{};  // per strategy
};

/// Runs the seeded strategy draw over all records. `index` may be null when
/// the mix gives extrapolatory zero weight; `client` may be null when no
/// strategy or option needs a generator. Identical inputs and seed give
/// byte-identical outputs.
SimulationResult simulate_dataset(std::span<const QaRecord> records, const Bm25Index* index,
                                  GenerationClient* client, const SimulationConfig& config);

}  // namespace attreval
