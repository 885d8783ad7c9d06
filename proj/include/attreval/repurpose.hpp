#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "attreval/example.hpp"
#include "attreval/jsonl.hpp"
#include "attreval/label.hpp"

namespace attreval {

/// Source corpora whose labels can be regrounded into the three-way scheme.
enum class SourceDataset {
    Fever,
    AdversarialFever,
    Feverous,
    VitaminC,
    MultiFc,
    PubHealth,
    SciFact,
    Snli,
    MultiNli,
    Anli,
    SciTail,
    XsumHalluc,
    Xent,
    FactCc,
};

inline constexpr std::array<SourceDataset, 14> kAllDatasets = {
    SourceDataset::Fever,     SourceDataset::AdversarialFever,
    SourceDataset::Feverous,  SourceDataset::VitaminC,
    SourceDataset::MultiFc,   SourceDataset::PubHealth,
    SourceDataset::SciFact,   SourceDataset::Snli,
    SourceDataset::MultiNli,  SourceDataset::Anli,
    SourceDataset::SciTail,   SourceDataset::XsumHalluc,
    SourceDataset::Xent,      SourceDataset::FactCc,
};

std::string_view to_string(SourceDataset dataset);
std::optional<SourceDataset> try_parse_dataset(std::string_view text);
SourceDataset parse_dataset(std::string_view text);

enum class TaskFamily { FactChecking, Nli, Summarization };
TaskFamily task_family(SourceDataset dataset);

/// One record of a source corpus, normalized: `claim` is the claim,
/// hypothesis, or summary; `evidence` the evidence, premise, or source text.
/// `evidence_pieces` holds multi-piece evidence (tables, sentences) that
/// needs joining. Ids may repeat for per-annotator rows.
struct SourceRecord {
    std::string id;
    std::string claim;
    std::string evidence;
    std::vector<std::string> evidence_pieces;
    std::string original_label;

    bool operator==(const SourceRecord&) const = default;
};

/// JSONL fields: {"id","claim","evidence","label"} plus optional
/// "evidence_pieces" array. Duplicate ids are allowed here; annotator rows
/// are merged later.
std::vector<SourceRecord> read_source_jsonl(const std::filesystem::path& path, IoMode mode);

/// Per-dataset mapping from original label strings to a target class or a
/// drop. Keys are canonicalized (trimmed, ASCII-uppercased).
class MappingTable {
  public:
    struct Target {
        std::optional<AttributionLabel> label;  // empty means drop
        bool drop = false;
        bool overridden = false;
    };

    /// Mapping used when the user supplies nothing. The MultiFc entries are
    /// this tool's documented choice of six common classes; unknown MultiFc
    /// labels drop instead of erroring because the full corpus has hundreds.
    static MappingTable defaults();

    /// Overrides from a JSON file: {"<dataset>": {"<label>": "<target>"}}
    /// where target is a class name or "drop".
    void apply_overrides_file(const std::filesystem::path& path);

    const Target* lookup(SourceDataset dataset, std::string_view original_label) const;
    bool unknown_label_drops(SourceDataset dataset) const;
    void set(SourceDataset dataset, std::string_view original_label, Target target);

  private:
    std::map<std::pair<SourceDataset, std::string>, Target> table_;
    std::set<SourceDataset> unknown_drops_;
};

/// Trimmed, ASCII-uppercased form used as the mapping key.
std::string canonical_label_key(std::string_view text);

/// "1. <first> 2. <second> ..." in input order.
std::string concat_evidence(std::span<const std::string> pieces);

/// Naive sentence splitter: breaks after '.', '!', '?' followed by
/// whitespace or end; trims fragments.
std::vector<std::string> split_sentences(std::string_view text);

/// Collapses per-annotator rows sharing an id into one record carrying the
/// majority label; exact ties are reported in `ties` and dropped. Output
/// keeps first-appearance order; claim and evidence come from the first row.
std::vector<SourceRecord> merge_by_id(std::span<const SourceRecord> records,
                                      std::vector<DropRecord>* ties);

struct RepurposeOutcome {
    std::vector<AttributionExample> examples;  // input order preserved
    std::vector<DropRecord> drops;
};

/// Converts source records into labeled examples. `seed` drives the donor
/// sentence draw for constructed no-evidence cases. When `strict` is set an
/// unmapped label or duplicate id throws; otherwise both become drops.
RepurposeOutcome repurpose_records(SourceDataset dataset, std::span<const SourceRecord> records,
                                   const MappingTable& table, uint64_t seed, bool strict);

}  // namespace attreval
