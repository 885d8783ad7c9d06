#include "attreval/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "attreval/errors.hpp"

namespace attreval {

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::vector<nlohmann::json> rows;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        nlohmann::json row = nlohmann::json::parse(line, nullptr, false);
        if (row.is_discarded()) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": invalid JSON");
        }
        if (!row.is_object()) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": expected a JSON object");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string jsonl_line(const nlohmann::json& row) {
    return row.dump();
}

void write_jsonl(const std::filesystem::path& path, std::span<const nlohmann::json> rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& row : rows) out << jsonl_line(row) << '\n';
    if (!out) throw Error("write failed: " + path.string());
}

void check_known_fields(const nlohmann::json& row, std::initializer_list<const char*> known,
                        IoMode mode, const char* what) {
    if (mode != IoMode::Strict) return;
    for (const auto& [key, value] : row.items()) {
        bool ok = false;
        for (const char* k : known) {
            if (key == k) { ok = true; break; }
        }
        if (!ok) {
            throw FormatError(std::string(what) + ": unknown field \"" + key + "\"");
        }
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace attreval
