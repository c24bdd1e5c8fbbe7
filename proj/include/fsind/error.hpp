#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fsind {

/// Typed failure categories. The CLI maps these to exit codes and the
/// machine-readable error object it prints on stderr.
enum class ErrorKind {
    InvalidArgument,
    SchemaError,
    SingularInput,
    NotHermitian,
    NegativeSpectrum,
    NotAssociative,
    BadUnit,
    BadStar,
    NotCStar,
    NotAntiMap,
    BadRepresentation,
    NotStarRep,
    BadDualStructure,
    NoTwistedMap,
    ComplexResult,
    InconsistentAlpha,
    UnexpectedDimension,
    AgreementFailure,
    BadGroup,
    NotInvolution,
    AxiomViolation,
    BadGroupoid,
    BadWeakHopf,
    NoHaar,
    NonUniqueHaar,
    NotCompact,
    BadCoalgebra,
    BadVarsigma,
    NotHopf,
    InternalConsistency,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::SingularInput: return "SingularInput";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NegativeSpectrum: return "NegativeSpectrum";
        case ErrorKind::NotAssociative: return "NotAssociative";
        case ErrorKind::BadUnit: return "BadUnit";
        case ErrorKind::BadStar: return "BadStar";
        case ErrorKind::NotCStar: return "NotCStar";
        case ErrorKind::NotAntiMap: return "NotAntiMap";
        case ErrorKind::BadRepresentation: return "BadRepresentation";
        case ErrorKind::NotStarRep: return "NotStarRep";
        case ErrorKind::BadDualStructure: return "BadDualStructure";
        case ErrorKind::NoTwistedMap: return "NoTwistedMap";
        case ErrorKind::ComplexResult: return "ComplexResult";
        case ErrorKind::InconsistentAlpha: return "InconsistentAlpha";
        case ErrorKind::UnexpectedDimension: return "UnexpectedDimension";
        case ErrorKind::AgreementFailure: return "AgreementFailure";
        case ErrorKind::BadGroup: return "BadGroup";
        case ErrorKind::NotInvolution: return "NotInvolution";
        case ErrorKind::AxiomViolation: return "AxiomViolation";
        case ErrorKind::BadGroupoid: return "BadGroupoid";
        case ErrorKind::BadWeakHopf: return "BadWeakHopf";
        case ErrorKind::NoHaar: return "NoHaar";
        case ErrorKind::NonUniqueHaar: return "NonUniqueHaar";
        case ErrorKind::NotCompact: return "NotCompact";
        case ErrorKind::BadCoalgebra: return "BadCoalgebra";
        case ErrorKind::BadVarsigma: return "BadVarsigma";
        case ErrorKind::NotHopf: return "NotHopf";
        case ErrorKind::InternalConsistency: return "InternalConsistency";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace fsind
