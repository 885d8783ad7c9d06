#include "attreval/repurpose.hpp"

#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "attreval/errors.hpp"
#include "attreval/rng.hpp"

namespace attreval {

std::string_view to_string(SourceDataset dataset) {
    switch (dataset) {
        case SourceDataset::Fever: return "fever";
        case SourceDataset::AdversarialFever: return "adversarial_fever";
        case SourceDataset::Feverous: return "feverous";
        case SourceDataset::VitaminC: return "vitaminc";
        case SourceDataset::MultiFc: return "multifc";
        case SourceDataset::PubHealth: return "pubhealth";
        case SourceDataset::SciFact: return "scifact";
        case SourceDataset::Snli: return "snli";
        case SourceDataset::MultiNli: return "multinli";
        case SourceDataset::Anli: return "anli";
        case SourceDataset::SciTail: return "scitail";
        case SourceDataset::XsumHalluc: return "xsum_halluc";
        case SourceDataset::Xent: return "xent";
        case SourceDataset::FactCc: return "factcc";
    }
    return "fever";
}

std::optional<SourceDataset> try_parse_dataset(std::string_view text) {
    std::string lowered;
    lowered.reserve(text.size());
    for (char ch : text) {
        lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    for (SourceDataset dataset : kAllDatasets) {
        if (lowered == to_string(dataset)) return dataset;
    }
    return std::nullopt;
}

SourceDataset parse_dataset(std::string_view text) {
    if (auto dataset = try_parse_dataset(text)) return *dataset;
    std::string known;
    for (SourceDataset dataset : kAllDatasets) {
        if (!known.empty()) known += ", ";
        known += to_string(dataset);
    }
    throw Error("unknown dataset \"" + std::string(text) + "\"; expected one of: " + known);
}

TaskFamily task_family(SourceDataset dataset) {
    switch (dataset) {
        case SourceDataset::Fever:
        case SourceDataset::AdversarialFever:
        case SourceDataset::Feverous:
        case SourceDataset::VitaminC:
        case SourceDataset::MultiFc:
        case SourceDataset::PubHealth:
        case SourceDataset::SciFact:
            return TaskFamily::FactChecking;
        case SourceDataset::Snli:
        case SourceDataset::MultiNli:
        case SourceDataset::Anli:
        case SourceDataset::SciTail:
            return TaskFamily::Nli;
        case SourceDataset::XsumHalluc:
        case SourceDataset::Xent:
        case SourceDataset::FactCc:
            return TaskFamily::Summarization;
    }
    return TaskFamily::FactChecking;
}

namespace {

std::string_view family_name(TaskFamily family) {
    switch (family) {
        case TaskFamily::FactChecking: return "fact_checking";
        case TaskFamily::Nli: return "nli";
        case TaskFamily::Summarization: return "summarization";
    }
    return "fact_checking";
}

}  // namespace

std::vector<SourceRecord> read_source_jsonl(const std::filesystem::path& path, IoMode mode) {
    std::vector<SourceRecord> records;
    for (const auto& row : read_jsonl(path)) {
        check_known_fields(row, {"id", "claim", "evidence", "evidence_pieces", "label"}, mode,
                           "source record");
        SourceRecord record;
        auto get_string = [&](const char* key, bool required) -> std::string {
            auto it = row.find(key);
            if (it == row.end() || it->is_null()) {
                if (required) {
                    throw FormatError(path.string() + ": source record missing field \"" +
                                      key + "\"");
                }
                return {};
            }
            if (!it->is_string()) {
                throw FormatError(path.string() + ": source record field \"" + std::string(key) +
                                  "\" must be a string");
            }
            return it->get<std::string>();
        };
        record.id = get_string("id", true);
        record.claim = get_string("claim", true);
        record.evidence = get_string("evidence", false);
        record.original_label = get_string("label", true);
        if (auto it = row.find("evidence_pieces"); it != row.end() && !it->is_null()) {
            if (!it->is_array()) {
                throw FormatError(path.string() + ": \"evidence_pieces\" must be an array");
            }
            for (const auto& piece : *it) {
                if (!piece.is_string()) {
                    throw FormatError(path.string() + ": evidence pieces must be strings");
                }
                record.evidence_pieces.push_back(piece.get<std::string>());
            }
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::string canonical_label_key(std::string_view text) {
    size_t begin = 0;
    while (begin < text.size() && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    size_t end = text.size();
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    std::string key;
    key.reserve(end - begin);
    for (size_t i = begin; i < end; ++i) {
        key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(text[i]))));
    }
    return key;
}

MappingTable MappingTable::defaults() {
    MappingTable table;
    auto map = [&](SourceDataset dataset, std::string_view label, AttributionLabel target) {
        table.set(dataset, label, Target{target, false, false});
    };
    for (SourceDataset dataset : {SourceDataset::Fever, SourceDataset::AdversarialFever,
                                  SourceDataset::Feverous, SourceDataset::VitaminC}) {
        map(dataset, "SUPPORTS", AttributionLabel::Attributable);
        map(dataset, "REFUTES", AttributionLabel::Contradictory);
        map(dataset, "NOT ENOUGH INFO", AttributionLabel::Extrapolatory);
    }
    map(SourceDataset::PubHealth, "TRUE", AttributionLabel::Attributable);
    map(SourceDataset::PubHealth, "FALSE", AttributionLabel::Contradictory);
    map(SourceDataset::PubHealth, "UNPROVEN", AttributionLabel::Extrapolatory);
    map(SourceDataset::PubHealth, "MIXTURE", AttributionLabel::Extrapolatory);
    map(SourceDataset::SciFact, "SUPPORT", AttributionLabel::Attributable);
    map(SourceDataset::SciFact, "CONTRADICT", AttributionLabel::Contradictory);
    map(SourceDataset::SciFact, "NOT ENOUGH INFO", AttributionLabel::Extrapolatory);
    map(SourceDataset::SciFact, "NEI", AttributionLabel::Extrapolatory);
    for (SourceDataset dataset :
         {SourceDataset::Snli, SourceDataset::MultiNli, SourceDataset::Anli}) {
        map(dataset, "ENTAILMENT", AttributionLabel::Attributable);
        map(dataset, "CONTRADICTION", AttributionLabel::Contradictory);
        map(dataset, "NEUTRAL", AttributionLabel::Extrapolatory);
    }
    map(SourceDataset::SciTail, "ENTAILS", AttributionLabel::Attributable);
    map(SourceDataset::SciTail, "NEUTRAL", AttributionLabel::Extrapolatory);
    map(SourceDataset::XsumHalluc, "GOLD", AttributionLabel::Attributable);
    map(SourceDataset::XsumHalluc, "INTRINSIC", AttributionLabel::Contradictory);
    map(SourceDataset::XsumHalluc, "EXTRINSIC", AttributionLabel::Extrapolatory);
    map(SourceDataset::Xent, "NON-HALLUCINATED", AttributionLabel::Attributable);
    map(SourceDataset::Xent, "NON-FACTUAL HALLUCINATION", AttributionLabel::Contradictory);
    map(SourceDataset::Xent, "INTRINSIC HALLUCINATION", AttributionLabel::Contradictory);
    map(SourceDataset::Xent, "FACTUAL HALLUCINATION", AttributionLabel::Extrapolatory);
    map(SourceDataset::FactCc, "CORRECT", AttributionLabel::Attributable);
    map(SourceDataset::FactCc, "INCORRECT", AttributionLabel::Extrapolatory);
    map(SourceDataset::MultiFc, "TRUE", AttributionLabel::Attributable);
    map(SourceDataset::MultiFc, "MOSTLY TRUE", AttributionLabel::Attributable);
    map(SourceDataset::MultiFc, "FALSE", AttributionLabel::Contradictory);
    map(SourceDataset::MultiFc, "MOSTLY FALSE", AttributionLabel::Contradictory);
    map(SourceDataset::MultiFc, "PANTS ON FIRE!", AttributionLabel::Contradictory);
    map(SourceDataset::MultiFc, "HALF TRUE", AttributionLabel::Extrapolatory);
    table.unknown_drops_.insert(SourceDataset::MultiFc);
    return table;
}

void MappingTable::set(SourceDataset dataset, std::string_view original_label, Target target) {
    table_[{dataset, canonical_label_key(original_label)}] = target;
}

const MappingTable::Target* MappingTable::lookup(SourceDataset dataset,
                                                 std::string_view original_label) const {
    auto it = table_.find({dataset, canonical_label_key(original_label)});
    return it == table_.end() ? nullptr : &it->second;
}

bool MappingTable::unknown_label_drops(SourceDataset dataset) const {
    return unknown_drops_.count(dataset) > 0;
}

void MappingTable::apply_overrides_file(const std::filesystem::path& path) {
    nlohmann::json body = nlohmann::json::parse(read_text_file(path), nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
        throw FormatError(path.string() + ": mapping file must be a JSON object");
    }
    for (const auto& [dataset_name, labels] : body.items()) {
        auto dataset = try_parse_dataset(dataset_name);
        if (!dataset) {
            throw FormatError(path.string() + ": unknown dataset \"" + dataset_name + "\"");
        }
        if (!labels.is_object()) {
            throw FormatError(path.string() + ": entry for \"" + dataset_name +
                              "\" must be an object");
        }
        for (const auto& [label, target_name] : labels.items()) {
            if (!target_name.is_string()) {
                throw FormatError(path.string() + ": mapping targets must be strings");
            }
            const std::string target_text = target_name.get<std::string>();
            Target target;
            target.overridden = true;
            if (canonical_label_key(target_text) == "DROP") {
                target.drop = true;
            } else if (auto parsed = try_parse_label(target_text)) {
                target.label = *parsed;
            } else {
                throw FormatError(path.string() + ": target \"" + target_text +
                                  "\" is neither a class name nor \"drop\"");
            }
            set(*dataset, label, target);
        }
    }
}

std::string concat_evidence(std::span<const std::string> pieces) {
    std::string out;
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (i > 0) out += ' ';
        out += std::to_string(i + 1);
        out += ". ";
        out += pieces[i];
    }
    return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    size_t begin = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        bool boundary = (ch == '.' || ch == '!' || ch == '?') &&
                        (i + 1 == text.size() ||
                         std::isspace(static_cast<unsigned char>(text[i + 1])));
        if (!boundary) continue;
        std::string_view piece = text.substr(begin, i + 1 - begin);
        while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.front()))) {
            piece.remove_prefix(1);
        }
        if (!piece.empty()) sentences.emplace_back(piece);
        begin = i + 1;
    }
    std::string_view tail = text.substr(begin);
    while (!tail.empty() && std::isspace(static_cast<unsigned char>(tail.front()))) {
        tail.remove_prefix(1);
    }
    while (!tail.empty() && std::isspace(static_cast<unsigned char>(tail.back()))) {
        tail.remove_suffix(1);
    }
    if (!tail.empty()) sentences.emplace_back(tail);
    return sentences;
}

std::vector<SourceRecord> merge_by_id(std::span<const SourceRecord> records,
                                      std::vector<DropRecord>* ties) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<const SourceRecord*>> groups;
    for (const auto& record : records) {
        auto [it, inserted] = groups.try_emplace(record.id);
        if (inserted) order.push_back(record.id);
        it->second.push_back(&record);
    }

    std::vector<SourceRecord> merged;
    for (const auto& id : order) {
        const auto& group = groups[id];
        std::map<std::string, size_t> votes;
        for (const SourceRecord* record : group) {
            ++votes[canonical_label_key(record->original_label)];
        }
        size_t best = 0;
        for (const auto& [label, count] : votes) best = std::max(best, count);
        std::vector<std::string> winners;
        for (const auto& [label, count] : votes) {
            if (count == best) winners.push_back(label);
        }
        if (winners.size() != 1) {
            if (ties) ties->push_back({id, "annotation tie"});
            continue;
        }
        SourceRecord out = *group.front();
        out.original_label = winners.front();
        merged.push_back(std::move(out));
    }
    return merged;
}

namespace {

bool is_scifact_nei(std::string_view canonical) {
    return canonical == "NOT ENOUGH INFO" || canonical == "NEI";
}

}  // namespace

RepurposeOutcome repurpose_records(SourceDataset dataset, std::span<const SourceRecord> records,
                                   const MappingTable& table, uint64_t seed, bool strict) {
    RepurposeOutcome outcome;

    std::vector<SourceRecord> merged;
    if (dataset == SourceDataset::XsumHalluc) {
        merged = merge_by_id(records, &outcome.drops);
        records = merged;
    }

    // Donor abstracts for constructed no-evidence cases.
    std::vector<const SourceRecord*> donors;
    if (dataset == SourceDataset::SciFact) {
        for (const auto& record : records) {
            if (!record.evidence.empty()) donors.push_back(&record);
        }
    }

    std::unordered_set<std::string> seen;
    for (const auto& record : records) {
        if (!seen.insert(record.id).second) {
            if (strict) {
                throw FormatError("duplicate source record id \"" + record.id + "\"");
            }
            outcome.drops.push_back({record.id, "duplicate id"});
            continue;
        }
        const std::string canonical = canonical_label_key(record.original_label);
        const MappingTable::Target* target = table.lookup(dataset, canonical);
        if (target == nullptr) {
            if (table.unknown_label_drops(dataset)) {
                outcome.drops.push_back({record.id, "unmapped label \"" +
                                                        record.original_label + "\""});
                continue;
            }
            if (strict) {
                throw UnknownLabelError(std::string(to_string(dataset)) + " record \"" +
                                            record.id + "\"",
                                        record.original_label);
            }
            outcome.drops.push_back(
                {record.id, "unknown label \"" + record.original_label + "\""});
            continue;
        }
        if (target->drop) {
            outcome.drops.push_back({record.id, "label mapped to drop"});
            continue;
        }

        AttributionExample example;
        example.id = std::string(to_string(dataset)) + "-" + record.id;
        example.answer = record.claim;
        example.source = to_string(dataset);
        example.label = *target->label;
        example.meta["original_label"] = record.original_label;
        example.meta["source_id"] = record.id;
        example.meta["task"] = family_name(task_family(dataset));
        if (target->overridden) example.meta["mapping_overridden"] = "true";

        if (dataset == SourceDataset::SciFact && is_scifact_nei(canonical)) {
            std::vector<const SourceRecord*> pool;
            for (const SourceRecord* donor : donors) {
                if (donor->id != record.id) pool.push_back(donor);
            }
            if (pool.empty()) {
                outcome.drops.push_back({record.id, "no donor abstract for evidence"});
                continue;
            }
            Rng rng = Rng::derive(seed, "scifact/" + record.id);
            const SourceRecord* donor = pool[rng.pick_index(pool.size())];
            auto sentences = split_sentences(donor->evidence);
            if (sentences.empty()) {
                outcome.drops.push_back({record.id, "donor abstract has no sentences"});
                continue;
            }
            example.reference = sentences[rng.pick_index(sentences.size())];
            example.meta["evidence_from"] = donor->id;
        } else if (dataset == SourceDataset::Feverous && !record.evidence_pieces.empty()) {
            example.reference = concat_evidence(record.evidence_pieces);
        } else {
            example.reference = record.evidence;
        }

        if (example.answer.empty()) {
            outcome.drops.push_back({record.id, "empty claim"});
            continue;
        }
        if (example.reference.empty()) {
            outcome.drops.push_back({record.id, "empty evidence"});
            continue;
        }
        outcome.examples.push_back(std::move(example));
    }
    return outcome;
}

}  // namespace attreval
