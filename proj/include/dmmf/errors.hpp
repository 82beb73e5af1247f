#pragma once

#include <stdexcept>
#include <string>

namespace dmmf {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid or non-ergodic value model, malformed distribution.
class ModelError : public Error {
public:
  using Error::Error;
};

// Experiment or mechanism configuration that fails validation.
class ConfigError : public Error {
public:
  using Error::Error;
};

class RequestError : public Error {
public:
  using Error::Error;
};

// A caller broke a documented precondition (request during a hold, a
// strategy reading history it is not allowed to see, ...).
class ContractViolation : public Error {
public:
  using Error::Error;
};

// A closed-form bound was evaluated outside its domain; the message names
// the violated condition.
class BoundInapplicable : public Error {
public:
  using Error::Error;
};

class OracleError : public Error {
public:
  using Error::Error;
};

class DerivativeUndefined : public Error {
public:
  using Error::Error;
};

class SigmaUndefined : public Error {
public:
  using Error::Error;
};

} // namespace dmmf
