#include "attreval/metrics.hpp"

#include <cctype>

#include "attreval/errors.hpp"

namespace attreval {

void ConfusionMatrix::add(AttributionLabel gold, std::optional<AttributionLabel> predicted) {
    const size_t row = static_cast<size_t>(label_index(gold));
    const size_t col =
        predicted ? static_cast<size_t>(label_index(*predicted)) : size_t(kUnparsedColumn);
    ++counts_[row][col];
}

uint64_t ConfusionMatrix::total() const {
    uint64_t sum = 0;
    for (const auto& row : counts_) {
        for (uint64_t cell : row) sum += cell;
    }
    return sum;
}

uint64_t ConfusionMatrix::diagonal() const {
    uint64_t sum = 0;
    for (size_t i = 0; i < counts_.size(); ++i) sum += counts_[i][i];
    return sum;
}

uint64_t ConfusionMatrix::unparsed() const {
    uint64_t sum = 0;
    for (const auto& row : counts_) sum += row[kUnparsedColumn];
    return sum;
}

double ConfusionMatrix::precision(AttributionLabel label) const {
    const size_t col = static_cast<size_t>(label_index(label));
    uint64_t predicted_as = 0;
    for (const auto& row : counts_) predicted_as += row[col];
    if (predicted_as == 0) return 0.0;
    return static_cast<double>(counts_[col][col]) / static_cast<double>(predicted_as);
}

double ConfusionMatrix::recall(AttributionLabel label) const {
    const size_t row = static_cast<size_t>(label_index(label));
    uint64_t gold_count = 0;
    for (uint64_t cell : counts_[row]) gold_count += cell;
    if (gold_count == 0) return 0.0;
    return static_cast<double>(counts_[row][row]) / static_cast<double>(gold_count);
}

double ConfusionMatrix::f1(AttributionLabel label) const {
    const double p = precision(label);
    const double r = recall(label);
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

double ConfusionMatrix::micro_f1() const {
    const uint64_t n = total();
    if (n == 0) throw Error("micro_f1: no scored pairs");
    return static_cast<double>(diagonal()) / static_cast<double>(n);
}

ConfusionMatrix score_predictions(std::span<const Prediction> predictions,
                                  std::span<const AttributionExample> gold) {
    std::unordered_map<std::string, AttributionLabel> labels;
    for (const auto& example : gold) {
        if (example.label) labels.emplace(example.id, *example.label);
    }
    std::string missing;
    ConfusionMatrix matrix;
    for (const auto& prediction : predictions) {
        auto it = labels.find(prediction.example_id);
        if (it == labels.end()) {
            if (!missing.empty()) missing += ", ";
            missing += prediction.example_id;
            continue;
        }
        matrix.add(it->second, prediction.predicted);
    }
    if (!missing.empty()) {
        throw MissingGoldError("predictions without labeled gold examples: " + missing);
    }
    return matrix;
}

EvalReport make_report(const ConfusionMatrix& matrix) {
    EvalReport report;
    report.n = matrix.total();
    report.micro_f1 = matrix.micro_f1();
    for (AttributionLabel label : kAllLabels) {
        report.f1[static_cast<size_t>(label_index(label))] = matrix.f1(label);
    }
    report.unparsed = matrix.unparsed();
    report.confusion = matrix;
    return report;
}

namespace {

std::string f1_key(AttributionLabel label) {
    std::string key(to_string(label));
    for (char& ch : key) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return key;
}

}  // namespace

nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json body;
    body["n"] = report.n;
    body["micro_f1"] = report.micro_f1;
    nlohmann::json f1;
    for (AttributionLabel label : kAllLabels) {
        f1[f1_key(label)] = report.f1[static_cast<size_t>(label_index(label))];
    }
    body["f1"] = f1;
    body["unparsed"] = report.unparsed;
    nlohmann::json confusion = nlohmann::json::array();
    for (int row = 0; row < 3; ++row) {
        nlohmann::json cells = nlohmann::json::array();
        for (int col = 0; col < 4; ++col) cells.push_back(report.confusion.at(row, col));
        confusion.push_back(std::move(cells));
    }
    body["confusion"] = confusion;
    return body;
}

EvalReport report_from_json(const nlohmann::json& body) {
    if (!body.is_object() || !body.contains("confusion") || !body["confusion"].is_array() ||
        body["confusion"].size() != 3) {
        throw FormatError("report: expected a 3-row confusion matrix");
    }
    ConfusionMatrix matrix;
    for (int row = 0; row < 3; ++row) {
        const auto& cells = body["confusion"][static_cast<size_t>(row)];
        if (!cells.is_array() || cells.size() != 4) {
            throw FormatError("report: each confusion row needs 4 columns");
        }
        const AttributionLabel gold = kAllLabels[static_cast<size_t>(row)];
        for (int col = 0; col < 4; ++col) {
            uint64_t count = cells[static_cast<size_t>(col)].get<uint64_t>();
            std::optional<AttributionLabel> predicted;
            if (col != ConfusionMatrix::kUnparsedColumn) {
                predicted = kAllLabels[static_cast<size_t>(col)];
            }
            for (uint64_t i = 0; i < count; ++i) matrix.add(gold, predicted);
        }
    }
    EvalReport report = make_report(matrix);
    // Stored ratios win over recomputation so a report round-trips exactly.
    if (body.contains("micro_f1")) report.micro_f1 = body["micro_f1"].get<double>();
    if (body.contains("f1") && body["f1"].is_object()) {
        for (AttributionLabel label : kAllLabels) {
            auto it = body["f1"].find(f1_key(label));
            if (it != body["f1"].end()) {
                report.f1[static_cast<size_t>(label_index(label))] = it->get<double>();
            }
        }
    }
    return report;
}

void write_report(const std::filesystem::path& path, const EvalReport& report) {
    write_text_file(path, report_to_json(report).dump(2) + "\n");
}

EvalReport read_report(const std::filesystem::path& path) {
    nlohmann::json body = nlohmann::json::parse(read_text_file(path), nullptr, false);
    if (body.is_discarded()) throw FormatError(path.string() + ": invalid JSON");
    return report_from_json(body);
}

}  // namespace attreval
