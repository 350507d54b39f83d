#include "ibis/error.hpp"

namespace ibis {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
        case ErrorCode::UnknownParent: return "UnknownParent";
        case ErrorCode::IllegalLink: return "IllegalLink";
        case ErrorCode::DuplicateNode: return "DuplicateNode";
        case ErrorCode::InvalidNode: return "InvalidNode";
        case ErrorCode::MalformedDocument: return "MalformedDocument";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::ExternalUnavailable: return "ExternalUnavailable";
        case ErrorCode::InvalidClassifier: return "InvalidClassifier";
        case ErrorCode::DatasetTooSmall: return "DatasetTooSmall";
        case ErrorCode::MissingClass: return "MissingClass";
        case ErrorCode::MissingParentLabels: return "MissingParentLabels";
        case ErrorCode::MalformedDataset: return "MalformedDataset";
        case ErrorCode::TypeMismatch: return "TypeMismatch";
        case ErrorCode::InvalidPolicy: return "InvalidPolicy";
        case ErrorCode::InvalidTemplate: return "InvalidTemplate";
        case ErrorCode::DuplicateEmail: return "DuplicateEmail";
        case ErrorCode::ConsentRequired: return "ConsentRequired";
        case ErrorCode::InvalidEmail: return "InvalidEmail";
        case ErrorCode::ThemeClosed: return "ThemeClosed";
        case ErrorCode::Unregistered: return "Unregistered";
        case ErrorCode::ModerationRejected: return "ModerationRejected";
        case ErrorCode::InvalidSatisfaction: return "InvalidSatisfaction";
        case ErrorCode::InvalidText: return "InvalidText";
        case ErrorCode::UnknownParentPost: return "UnknownParentPost";
        case ErrorCode::UnknownTheme: return "UnknownTheme";
        case ErrorCode::Unauthorized: return "Unauthorized";
        case ErrorCode::ThemeNotEmpty: return "ThemeNotEmpty";
        case ErrorCode::MalformedTranscript: return "MalformedTranscript";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::StorageFailure: return "StorageFailure";
        case ErrorCode::InvalidWindow: return "InvalidWindow";
    }
    return "Unknown";
}

}  // namespace ibis
