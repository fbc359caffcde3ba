#ifndef DMF_ERRORS_HPP
#define DMF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dmf {

// Input/data errors (CLI exit code 2).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedRow : DataError {
  MalformedRow(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

struct EmptyInput : DataError {
  using DataError::DataError;
};

struct DegenerateSplit : DataError {
  using DataError::DataError;
};

struct InvalidSigma : DataError {
  using DataError::DataError;
};

struct IsolatedUser : DataError {
  using DataError::DataError;
};

struct InsufficientCandidates : DataError {
  using DataError::DataError;
};

struct EmptyTestSet : DataError {
  using DataError::DataError;
};

struct NoTestUsers : DataError {
  using DataError::DataError;
};

// Numeric failures (CLI exit code 3).
struct NonFiniteUpdate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dmf

#endif
