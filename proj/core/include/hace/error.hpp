#ifndef HACE_ERROR_HPP_
#define HACE_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hace {

enum class ErrorKind {
  MissingIdentity,
  NonAssociative,
  IllTypedComposite,
  DanglingId,
  CyclicGraph,
  NotAPoset,
  NotAMonoid,
  SizeCapExceeded,
  InterchangeFailure,
  NonFunctorialSlot,
  NotFunctorial,
  NotNatural,
  ShapeMismatch,
  IdentityUnavailable,
  MethodUnavailable,
  NonUnique,
  NoFactorization,
  BijectionFailure,
  NotALattice,
  NotStrictMonoidal,
  ParseError,
  ResolutionError,
  GenerationExhausted,
};

char const* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string const& msg);

  ErrorKind kind() const noexcept {
    return _kind;
  }

 private:
  ErrorKind _kind;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t col, std::string expected);

  std::size_t line() const noexcept {
    return _line;
  }
  std::size_t col() const noexcept {
    return _col;
  }
  std::string const& expected() const noexcept {
    return _expected;
  }

 private:
  std::size_t _line;
  std::size_t _col;
  std::string _expected;
};

}  // namespace hace

#endif  // HACE_ERROR_HPP_
