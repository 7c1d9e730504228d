#pragma once

#include <stdexcept>
#include <string>

namespace tropex {

enum class ErrorCode {
    NotStronglyConvex,
    DimensionMismatch,
    AmbientMismatch,
    RayNotInComplex,
    InvalidInput,
    UnsupportedDimension,
    DegenerateInput,
    NonparallelRay,
    NotConeOverGraph,
    NotARefinement,
    ShapeMismatch,
    EmptyInterior,
    BudgetExceeded,
    NotStable,
    NotClosed,
    NotEquivariant,
    FaceMismatch,
    SupportMismatch,
    BadIndex,
    NotRegular,
    NotInterior,
    ParseError,
    InternalError,
};

inline const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NotStronglyConvex: return "NotStronglyConvex";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::AmbientMismatch: return "AmbientMismatch";
        case ErrorCode::RayNotInComplex: return "RayNotInComplex";
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::NonparallelRay: return "NonparallelRay";
        case ErrorCode::NotConeOverGraph: return "NotConeOverGraph";
        case ErrorCode::NotARefinement: return "NotARefinement";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::EmptyInterior: return "EmptyInterior";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::NotStable: return "NotStable";
        case ErrorCode::NotClosed: return "NotClosed";
        case ErrorCode::NotEquivariant: return "NotEquivariant";
        case ErrorCode::FaceMismatch: return "FaceMismatch";
        case ErrorCode::SupportMismatch: return "SupportMismatch";
        case ErrorCode::BadIndex: return "BadIndex";
        case ErrorCode::NotRegular: return "NotRegular";
        case ErrorCode::NotInterior: return "NotInterior";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InternalError: return "InternalError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace tropex
