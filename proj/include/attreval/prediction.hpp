#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "attreval/jsonl.hpp"
#include "attreval/label.hpp"
#include "attreval/prompts.hpp"

namespace attreval {

/// One model verdict on one example. `predicted` is absent when no label
/// could be extracted; `error` is non-empty when the endpoint call failed.
struct Prediction {
    std::string example_id;
    std::optional<AttributionLabel> predicted;
    std::string raw_response;
    PromptVariant prompt_variant = PromptVariant::Attribution;
    std::string model_id;
    int shots = 0;
    std::string error;

    bool operator==(const Prediction&) const = default;
};

nlohmann::json prediction_to_json(const Prediction& prediction);
Prediction prediction_from_json(const nlohmann::json& row, IoMode mode);

std::vector<Prediction> read_predictions_jsonl(const std::filesystem::path& path, IoMode mode);
void write_predictions_jsonl(const std::filesystem::path& path,
                             std::span<const Prediction> predictions);

}  // namespace attreval
