#include "attreval/example.hpp"

#include <unordered_set>

#include "attreval/errors.hpp"

namespace attreval {

std::vector<std::string> validate_example(const AttributionExample& example) {
    std::vector<std::string> violations;
    if (example.id.empty()) violations.push_back("id is empty");
    if (example.answer.empty()) violations.push_back("answer is empty");
    if (example.reference.empty()) violations.push_back("reference is empty");
    return violations;
}

nlohmann::json example_to_json(const AttributionExample& example) {
    nlohmann::json row;
    row["id"] = example.id;
    row["query"] = example.query;
    row["answer"] = example.answer;
    row["reference"] = example.reference;
    if (example.label) {
        row["label"] = std::string(to_string(*example.label));
    } else {
        row["label"] = nullptr;
    }
    row["source"] = example.source;
    row["meta"] = example.meta;
    return row;
}

namespace {

std::string require_string(const nlohmann::json& row, const char* key, const char* what) {
    auto it = row.find(key);
    if (it == row.end()) {
        throw FormatError(std::string(what) + ": missing field \"" + key + "\"");
    }
    if (!it->is_string()) {
        throw FormatError(std::string(what) + ": field \"" + key + "\" must be a string");
    }
    return it->get<std::string>();
}

std::string optional_string(const nlohmann::json& row, const char* key, const char* what) {
    auto it = row.find(key);
    if (it == row.end() || it->is_null()) return {};
    if (!it->is_string()) {
        throw FormatError(std::string(what) + ": field \"" + key + "\" must be a string");
    }
    return it->get<std::string>();
}

}  // namespace

AttributionExample example_from_json(const nlohmann::json& row, IoMode mode) {
    static constexpr const char* kWhat = "example";
    check_known_fields(row, {"id", "query", "answer", "reference", "label", "source", "meta"},
                       mode, kWhat);
    AttributionExample example;
    example.id = require_string(row, "id", kWhat);
    example.query = optional_string(row, "query", kWhat);
    example.answer = require_string(row, "answer", kWhat);
    example.reference = require_string(row, "reference", kWhat);
    if (auto it = row.find("label"); it != row.end() && !it->is_null()) {
        if (!it->is_string()) throw FormatError("example: field \"label\" must be a string or null");
        auto label = try_parse_label(it->get<std::string>());
        if (!label) {
            throw UnknownLabelError("example \"" + example.id + "\"", it->get<std::string>());
        }
        example.label = *label;
    }
    example.source = optional_string(row, "source", kWhat);
    if (auto it = row.find("meta"); it != row.end() && !it->is_null()) {
        if (!it->is_object()) throw FormatError("example: field \"meta\" must be an object");
        for (const auto& [key, value] : it->items()) {
            if (!value.is_string()) {
                throw FormatError("example: meta value for \"" + key + "\" must be a string");
            }
            example.meta[key] = value.get<std::string>();
        }
    }
    return example;
}

std::vector<AttributionExample> read_examples_jsonl(const std::filesystem::path& path,
                                                    IoMode mode) {
    std::vector<AttributionExample> examples;
    std::unordered_set<std::string> seen;
    for (const auto& row : read_jsonl(path)) {
        AttributionExample example = example_from_json(row, mode);
        if (!seen.insert(example.id).second) {
            throw FormatError(path.string() + ": duplicate example id \"" + example.id + "\"");
        }
        examples.push_back(std::move(example));
    }
    return examples;
}

void write_examples_jsonl(const std::filesystem::path& path,
                          std::span<const AttributionExample> examples) {
    std::vector<nlohmann::json> rows;
    rows.reserve(examples.size());
    for (const auto& example : examples) rows.push_back(example_to_json(example));
    write_jsonl(path, rows);
}

void write_drop_report(const std::filesystem::path& path, std::span<const DropRecord> drops) {
    std::vector<nlohmann::json> rows;
    rows.reserve(drops.size());
    for (const auto& drop : drops) {
        rows.push_back(nlohmann::json{{"id", drop.id}, {"reason", drop.reason}});
    }
    write_jsonl(path, rows);
}

std::vector<DropRecord> read_drop_report(const std::filesystem::path& path) {
    std::vector<DropRecord> drops;
    for (const auto& row : read_jsonl(path)) {
        DropRecord drop;
        drop.id = require_string(row, "id", "drop record");
        drop.reason = require_string(row, "reason", "drop record");
        drops.push_back(std::move(drop));
    }
    return drops;
}

}  // namespace attreval
