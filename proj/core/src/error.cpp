#include "hace/error.hpp"

#include <string>

namespace hace {

char const* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingIdentity: return "MissingIdentity";
    case ErrorKind::NonAssociative: return "NonAssociative";
    case ErrorKind::IllTypedComposite: return "IllTypedComposite";
    case ErrorKind::DanglingId: return "DanglingId";
    case ErrorKind::CyclicGraph: return "CyclicGraph";
    case ErrorKind::NotAPoset: return "NotAPoset";
    case ErrorKind::NotAMonoid: return "NotAMonoid";
    case ErrorKind::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorKind::InterchangeFailure: return "InterchangeFailure";
    case ErrorKind::NonFunctorialSlot: return "NonFunctorialSlot";
    case ErrorKind::NotFunctorial: return "NotFunctorial";
    case ErrorKind::NotNatural: return "NotNatural";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::IdentityUnavailable: return "IdentityUnavailable";
    case ErrorKind::MethodUnavailable: return "MethodUnavailable";
    case ErrorKind::NonUnique: return "NonUnique";
    case ErrorKind::NoFactorization: return "NoFactorization";
    case ErrorKind::BijectionFailure: return "BijectionFailure";
    case ErrorKind::NotALattice: return "NotALattice";
    case ErrorKind::NotStrictMonoidal: return "NotStrictMonoidal";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ResolutionError: return "ResolutionError";
    case ErrorKind::GenerationExhausted: return "GenerationExhausted";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, std::string const& msg)
    : std::runtime_error(std::string(to_string(kind)) + ": " + msg),
      _kind(kind) {}

ParseError::ParseError(std::size_t line, std::size_t col, std::string expected)
    : Error(ErrorKind::ParseError,
            "line " + std::to_string(line) + ", col " + std::to_string(col)
                + ": expected " + expected),
      _line(line),
      _col(col),
      _expected(std::move(expected)) {}

}  // namespace hace
