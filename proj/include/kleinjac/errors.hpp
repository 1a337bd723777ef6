#pragma once

#include <stdexcept>
#include <string>

namespace kleinjac {

enum class ErrorKind {
    // curve validation
    OddDegree,
    DegreeTooSmall,
    RealBranchPoint,
    OrientableCover,
    RepeatedRoot,
    // continuation and routing
    BranchTooClose,
    SheetMismatch,
    RoutingFailed,
    // homology
    CutCollision,
    NonTransversal,
    NonIntegralCoefficient,
    SigmaActionInvalid,
    FixedRankDeficient,
    // periods
    QuadratureStall,
    SingularPeriodBlock,
    // jacobian
    RankDeficient,
    LatticeNotSigmaStable,
    DegreeNonzero,
    GenusTooLarge,
    NotSigmaInvariant,
    // divisors
    BranchValue,
    // input handling
    BadInput,
    Internal,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::OddDegree: return "OddDegree";
        case ErrorKind::DegreeTooSmall: return "DegreeTooSmall";
        case ErrorKind::RealBranchPoint: return "RealBranchPoint";
        case ErrorKind::OrientableCover: return "OrientableCover";
        case ErrorKind::RepeatedRoot: return "RepeatedRoot";
        case ErrorKind::BranchTooClose: return "BranchTooClose";
        case ErrorKind::SheetMismatch: return "SheetMismatch";
        case ErrorKind::RoutingFailed: return "RoutingFailed";
        case ErrorKind::CutCollision: return "CutCollision";
        case ErrorKind::NonTransversal: return "NonTransversal";
        case ErrorKind::NonIntegralCoefficient: return "NonIntegralCoefficient";
        case ErrorKind::SigmaActionInvalid: return "SigmaActionInvalid";
        case ErrorKind::FixedRankDeficient: return "FixedRankDeficient";
        case ErrorKind::QuadratureStall: return "QuadratureStall";
        case ErrorKind::SingularPeriodBlock: return "SingularPeriodBlock";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::LatticeNotSigmaStable: return "LatticeNotSigmaStable";
        case ErrorKind::DegreeNonzero: return "DegreeNonzero";
        case ErrorKind::GenusTooLarge: return "GenusTooLarge";
        case ErrorKind::NotSigmaInvariant: return "NotSigmaInvariant";
        case ErrorKind::BranchValue: return "BranchValue";
        case ErrorKind::BadInput: return "BadInput";
        case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg),
          kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace kleinjac
