#pragma once

#include <stdexcept>
#include <string>

namespace acet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A box or patch without usable area.
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise unusable numeric input.
class DataError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class InitError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

// No sample received a positive ensemble label; the caller holds its previous state.
class NoPositiveError : public Error {
 public:
  using Error::Error;
};

}  // namespace acet
