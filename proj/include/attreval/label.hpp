#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace attreval {

/// The three-way verdict on whether a reference supports an answer.
enum class AttributionLabel {
    Attributable,    // the reference fully supports the answer
    Contradictory,   // the reference refutes the answer
    Extrapolatory,   // the reference is insufficient either way
};

inline constexpr std::array<AttributionLabel, 3> kAllLabels = {
    AttributionLabel::Attributable,
    AttributionLabel::Contradictory,
    AttributionLabel::Extrapolatory,
};

/// Canonical spelling: "Attributable", "Contradictory", "Extrapolatory".
std::string_view to_string(AttributionLabel label);

/// Case-insensitive parse of a canonical label name.
std::optional<AttributionLabel> try_parse_label(std::string_view text);

/// Like try_parse_label but throws UnknownLabelError.
AttributionLabel parse_label(std::string_view text);

/// Position of a label in kAllLabels (row/column index in a confusion matrix).
constexpr int label_index(AttributionLabel label) { return static_cast<int>(label); }

}  // namespace attreval
