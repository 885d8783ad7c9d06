#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "attreval/jsonl.hpp"
#include "attreval/label.hpp"

namespace attreval {

/// One evaluation unit: does `reference` support `answer` (for `query`)?
/// `query` is empty for claim-only sources; `label` is absent on unlabeled
/// data headed to an evaluator.
struct AttributionExample {
    std::string id;
    std::string query;
    std::string answer;
    std::string reference;
    std::optional<AttributionLabel> label;
    std::string source;
    std::map<std::string, std::string> meta;

    bool operator==(const AttributionExample&) const = default;
};

/// Human-readable invariant violations; empty means the example is shippable.
std::vector<std::string> validate_example(const AttributionExample& example);

nlohmann::json example_to_json(const AttributionExample& example);
AttributionExample example_from_json(const nlohmann::json& row, IoMode mode);

/// Reads a dataset file. Duplicate ids are rejected in both modes.
std::vector<AttributionExample> read_examples_jsonl(const std::filesystem::path& path, IoMode mode);
void write_examples_jsonl(const std::filesystem::path& path,
                          std::span<const AttributionExample> examples);

/// One input record excluded from an output, and why.
struct DropRecord {
    std::string id;
    std::string reason;

    bool operator==(const DropRecord&) const = default;
};

void write_drop_report(const std::filesystem::path& path, std::span<const DropRecord> drops);
std::vector<DropRecord> read_drop_report(const std::filesystem::path& path);

}  // namespace attreval
