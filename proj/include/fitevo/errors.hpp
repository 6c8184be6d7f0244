#pragma once

#include <stdexcept>
#include <string>

namespace fitevo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside its mathematical domain (fitness outside [0,1], i = 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed measure, set, or law (normalization, ordering, both means infinite).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Birth/death steps called out of the odd/even protocol.
class SequencingError : public Error {
 public:
  using Error::Error;
};

// A quantity requested outside the regime where it is defined.
class RegimeError : public Error {
 public:
  using Error::Error;
};

class EmptyPopulationError : public Error {
 public:
  using Error::Error;
};

// Config file problems; the CLI maps these to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fitevo
