#pragma once

#include <stdexcept>
#include <string>

namespace attreval {

/// Base class for every error this library raises on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A label string that is not one of the recognized class names.
struct UnknownLabelError : Error {
    UnknownLabelError(const std::string& context, const std::string& label)
        : Error(context + ": unknown label \"" + label + "\""), label_text(label) {}
    std::string label_text;
};

/// Malformed input file (bad JSON, missing field, duplicate id, ...).
struct FormatError : Error {
    using Error::Error;
};

/// A persisted artifact was written by an incompatible format version.
struct VersionError : Error {
    using Error::Error;
};

/// The prompt token budget cannot hold even the instruction plus the claim.
struct BudgetError : Error {
    using Error::Error;
};

/// Predictions reference example ids that have no gold label.
struct MissingGoldError : Error {
    using Error::Error;
};

/// Failure talking to a generation endpoint.
struct ClientError : Error {
    using Error::Error;
};

/// Endpoint rejected the credential; retrying cannot help.
struct AuthError : ClientError {
    using ClientError::ClientError;
};

/// Endpoint replied but not in the expected completion shape.
struct MalformedResponseError : ClientError {
    using ClientError::ClientError;
};

/// All retry attempts failed; message carries the last failure.
struct RetriesExhaustedError : ClientError {
    using ClientError::ClientError;
};

}  // namespace attreval
