#pragma once

#include <stdexcept>
#include <string>

namespace psyrisk {

/// Invalid configuration, lexicon, or command-line arguments.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data, including IO failures.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values, singular problems, or other numerical breakdowns.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace psyrisk
