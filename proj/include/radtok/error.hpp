#pragma once

#include <stdexcept>
#include <string>

namespace radtok {

// Base for every error raised by the library. The CLI maps InvariantError to
// exit code 3 and everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user-supplied parameters (regime, model shape, budget).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input files or text.
class ParseError : public Error {
 public:
  using Error::Error;
};

class VersionError : public ParseError {
 public:
  using ParseError::ParseError;
};

// I/O failures and other unusable inputs.
class InputError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

// A structural invariant of a tokenizer or corpus does not hold.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace radtok
