#pragma once

#include <stdexcept>
#include <string>

namespace lad {

enum class ErrorKind {
    VarSpaceMismatch,
    UnknownVariable,
    IncompleteSubstitution,
    EmptyIntegrationSet,
    ShapeError,
    AlgebroidMismatch,
    VarClash,
    NotProlongation,
    ArityMismatch,
    TargetMismatch,
    ChainMismatch,
    InvalidAlgebroid,
    BadAverageSet,
    BadFaceIndex,
    NotPointAlgebroid,
    NotClosed,
    EndpointError,
};

/// All engine failures carry a machine-checkable kind plus a human message.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::VarSpaceMismatch: return "VarSpaceMismatch";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::IncompleteSubstitution: return "IncompleteSubstitution";
    case ErrorKind::EmptyIntegrationSet: return "EmptyIntegrationSet";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::AlgebroidMismatch: return "AlgebroidMismatch";
    case ErrorKind::VarClash: return "VarClash";
    case ErrorKind::NotProlongation: return "NotProlongation";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::TargetMismatch: return "TargetMismatch";
    case ErrorKind::ChainMismatch: return "ChainMismatch";
    case ErrorKind::InvalidAlgebroid: return "InvalidAlgebroid";
    case ErrorKind::BadAverageSet: return "BadAverageSet";
    case ErrorKind::BadFaceIndex: return "BadFaceIndex";
    case ErrorKind::NotPointAlgebroid: return "NotPointAlgebroid";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::EndpointError: return "EndpointError";
    }
    return "Error";
}

} // namespace lad
