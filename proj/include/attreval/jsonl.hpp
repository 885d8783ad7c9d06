#pragma once

#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace attreval {

/// Strict rejects unknown fields in input records; Lenient ignores them.
enum class IoMode { Strict, Lenient };

/// Parses one JSON object per non-blank line. Throws FormatError with the
/// 1-based line number on bad JSON or a non-object line.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

/// Writes one compact JSON object per line, object keys sorted.
void write_jsonl(const std::filesystem::path& path, std::span<const nlohmann::json> rows);

/// Serializes one row the way write_jsonl does, without the newline.
std::string jsonl_line(const nlohmann::json& row);

/// In Strict mode throws FormatError when `row` has a key outside `known`.
/// `what` names the record type for the message.
void check_known_fields(const nlohmann::json& row, std::initializer_list<const char*> known,
                        IoMode mode, const char* what);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace attreval
