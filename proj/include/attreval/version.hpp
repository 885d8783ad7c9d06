#pragma once

namespace attreval {

inline constexpr const char* kToolVersion = "0.1.0";

/// Bumped when the canonical dataset JSONL schema changes incompatibly.
inline constexpr int kDatasetFormatVersion = 1;
/// Bumped when the prediction JSONL schema changes incompatibly.
inline constexpr int kPredictionFormatVersion = 1;
/// Bumped when the score report JSON schema changes incompatibly.
inline constexpr int kReportFormatVersion = 1;
/// Bumped when the binary retrieval index layout changes incompatibly.
inline constexpr int kIndexFormatVersion = 1;

}  // namespace attreval
