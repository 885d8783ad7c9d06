#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "attreval/example.hpp"
#include "attreval/label.hpp"
#include "attreval/prediction.hpp"

namespace attreval {

/// 3x4 gold-by-predicted counts. The fourth column holds predictions where
/// no label could be extracted; it counts against recall (those gold
/// examples were missed) but not precision (nothing was asserted).
class ConfusionMatrix {
  public:
    static constexpr int kUnparsedColumn = 3;

    void add(AttributionLabel gold, std::optional<AttributionLabel> predicted);

    uint64_t at(int gold_row, int predicted_column) const {
        return counts_[static_cast<size_t>(gold_row)][static_cast<size_t>(predicted_column)];
    }
    uint64_t total() const;
    uint64_t diagonal() const;
    uint64_t unparsed() const;

    /// All ratios define 0/0 as 0.
    double precision(AttributionLabel label) const;
    double recall(AttributionLabel label) const;
    double f1(AttributionLabel label) const;

    /// diagonal / total; identical to plain accuracy over all scored pairs.
    /// Throws Error when the matrix is empty.
    double micro_f1() const;

    bool operator==(const ConfusionMatrix&) const = default;

  private:
    std::array<std::array<uint64_t, 4>, 3> counts_{};
};

struct EvalReport {
    uint64_t n = 0;
    double micro_f1 = 0.0;
    std::array<double, 3> f1{};  // indexed by label_index
    uint64_t unparsed = 0;
    ConfusionMatrix confusion;

    bool operator==(const EvalReport&) const = default;
};

/// Joins predictions to gold labels by example id. Throws MissingGoldError
/// when any prediction references an id with no labeled gold example.
ConfusionMatrix score_predictions(std::span<const Prediction> predictions,
                                  std::span<const AttributionExample> gold);

EvalReport make_report(const ConfusionMatrix& matrix);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& body);
void write_report(const std::filesystem::path& path, const EvalReport& report);
EvalReport read_report(const std::filesystem::path& path);

}  // namespace attreval
