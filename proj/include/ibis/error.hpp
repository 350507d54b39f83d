#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ibis {

enum class ErrorCode {
    // discussion tree
    UnknownParent,
    IllegalLink,
    DuplicateNode,
    InvalidNode,
    MalformedDocument,
    // extraction and evaluation
    EmptyInput,
    ExternalUnavailable,
    InvalidClassifier,
    DatasetTooSmall,
    MissingClass,
    MissingParentLabels,
    MalformedDataset,
    // facilitator
    TypeMismatch,
    InvalidPolicy,
    InvalidTemplate,
    // service
    DuplicateEmail,
    ConsentRequired,
    InvalidEmail,
    ThemeClosed,
    Unregistered,
    ModerationRejected,
    InvalidSatisfaction,
    InvalidText,
    UnknownParentPost,
    UnknownTheme,
    Unauthorized,
    ThemeNotEmpty,
    MalformedTranscript,
    OutOfRange,
    StorageFailure,
    // analytics
    InvalidWindow,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code; the message is for humans.
/// `detail` holds the offending value where one exists (the blocked term,
/// the transcript line number).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string detail = {})
        : std::runtime_error(message), code_(code), detail_(std::move(detail))
    {
    }

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace ibis
