#include "attreval/prediction.hpp"

#include "attreval/errors.hpp"

namespace attreval {

nlohmann::json prediction_to_json(const Prediction& prediction) {
    nlohmann::json row;
    row["example_id"] = prediction.example_id;
    if (prediction.predicted) {
        row["predicted"] = std::string(to_string(*prediction.predicted));
    } else {
        row["predicted"] = nullptr;
    }
    row["raw_response"] = prediction.raw_response;
    row["prompt_variant"] = std::string(to_string(prediction.prompt_variant));
    row["model_id"] = prediction.model_id;
    row["shots"] = prediction.shots;
    if (!prediction.error.empty()) row["error"] = prediction.error;
    return row;
}

Prediction prediction_from_json(const nlohmann::json& row, IoMode mode) {
    static constexpr const char* kWhat = "prediction";
    check_known_fields(row,
                       {"example_id", "predicted", "raw_response", "prompt_variant", "model_id",
                        "shots", "error"},
                       mode, kWhat);
    Prediction prediction;
    auto get_string = [&](const char* key, bool required) -> std::string {
        auto it = row.find(key);
        if (it == row.end() || it->is_null()) {
            if (required) {
                throw FormatError(std::string(kWhat) + ": missing field \"" + key + "\"");
            }
            return {};
        }
        if (!it->is_string()) {
            throw FormatError(std::string(kWhat) + ": field \"" + key + "\" must be a string");
        }
        return it->get<std::string>();
    };
    prediction.example_id = get_string("example_id", true);
    if (auto it = row.find("predicted"); it != row.end() && !it->is_null()) {
        if (!it->is_string()) {
            throw FormatError("prediction: field \"predicted\" must be a string or null");
        }
        auto label = try_parse_label(it->get<std::string>());
        if (!label) {
            throw UnknownLabelError("prediction \"" + prediction.example_id + "\"",
                                    it->get<std::string>());
        }
        prediction.predicted = *label;
    }
    prediction.raw_response = get_string("raw_response", false);
    if (std::string variant = get_string("prompt_variant", false); !variant.empty()) {
        prediction.prompt_variant = parse_variant(variant);
    }
    prediction.model_id = get_string("model_id", false);
    if (auto it = row.find("shots"); it != row.end() && !it->is_null()) {
        if (!it->is_number_integer()) {
            throw FormatError("prediction: field \"shots\" must be an integer");
        }
        prediction.shots = it->get<int>();
    }
    prediction.error = get_string("error", false);
    return prediction;
}

std::vector<Prediction> read_predictions_jsonl(const std::filesystem::path& path, IoMode mode) {
    std::vector<Prediction> predictions;
    for (const auto& row : read_jsonl(path)) {
        predictions.push_back(prediction_from_json(row, mode));
    }
    return predictions;
}

void write_predictions_jsonl(const std::filesystem::path& path,
                             std::span<const Prediction> predictions) {
    std::vector<nlohmann::json> rows;
    rows.reserve(predictions.size());
    for (const auto& prediction : predictions) rows.push_back(prediction_to_json(prediction));
    write_jsonl(path, rows);
}

}  // namespace attreval
