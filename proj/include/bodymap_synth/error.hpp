#pragma once

#include <stdexcept>
#include <string>

namespace bms {

// Every failure raised by the library derives from Error. The CLI maps the
// concrete types onto its exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, dimensions, scenario rules or config files.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Unreadable/unwritable files, missing manifests.
class IoError : public Error {
public:
  using Error::Error;
};

/// Malformed PNG data.
class DecodeError : public IoError {
public:
  using IoError::IoError;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Rejection sampling ran out of tries for a single point.
class SamplingExhausted : public Error {
public:
  using Error::Error;
};

/// A whole primitive (or image) could not be generated within its retry budget.
class GenerationFailed : public Error {
public:
  using Error::Error;
};

}  // namespace bms
