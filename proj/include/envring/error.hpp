// SPDX-License-Identifier: Apache-2.0
//
// Error type shared by every envring module.

#ifndef ENVRING_ERROR_HPP_
#define ENVRING_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace envring {

  enum class ErrorKind {
    ArityMismatch,
    UnknownSymbol,
    ConstantInTerm,
    NoCanonicalizer,
    IllDefinedHom,
    InfiniteFiber,
    NotSplit,
    NotHom,
    NotCongruence,
    NotTotallyInV,
    NotWellDefined,
    NotStabilized,
    MissingGenerator,
    NotIdeal,
    Parse,
    Validation,
  };

  std::string_view to_string(ErrorKind kind) noexcept;

  class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, std::string const& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what),
          _kind(kind) {}

    ErrorKind kind() const noexcept {
      return _kind;
    }

   private:
    ErrorKind _kind;
  };

  [[noreturn]] inline void fail(ErrorKind kind, std::string const& what) {
    throw Error(kind, what);
  }

}  // namespace envring

#endif  // ENVRING_ERROR_HPP_
