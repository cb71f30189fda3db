#pragma once

#include <stdexcept>
#include <string>

namespace prosogate {

/// Base class of every error the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed grammar text, undeclared features, cyclic AVMs, duplicate ids.
class GrammarError : public Error {
 public:
  using Error::Error;
};

/// Malformed corpus / classifier / report input.
class InputFormatError : public Error {
 public:
  using Error::Error;
};

/// Failures raised while parsing a turn (unknown words, edge cap).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invalid arguments to a library operation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace prosogate
