#include "attreval/label.hpp"

#include <cctype>
#include <string>

#include "attreval/errors.hpp"

namespace attreval {

std::string_view to_string(AttributionLabel label) {
    switch (label) {
        case AttributionLabel::Attributable: return "Attributable";
        case AttributionLabel::Contradictory: return "Contradictory";
        case AttributionLabel::Extrapolatory: return "Extrapolatory";
    }
    return "Attributable";
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::optional<AttributionLabel> try_parse_label(std::string_view text) {
    for (AttributionLabel label : kAllLabels) {
        if (iequals(text, to_string(label))) return label;
    }
    return std::nullopt;
}

AttributionLabel parse_label(std::string_view text) {
    if (auto label = try_parse_label(text)) return *label;
    throw UnknownLabelError("parse_label", std::string(text));
}

}  // namespace attreval
