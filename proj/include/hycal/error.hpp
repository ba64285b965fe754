#pragma once

#include <stdexcept>
#include <string>

namespace hycal {

// Base of every error raised by the library. Validation failures map to
// CLI exit code 1, IoError to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Violations of the incremental protocol: overlapping class sets,
// re-ingesting a class, evaluating an empty store.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SingularCovarianceError : public Error {
 public:
  using Error::Error;
};

class ZeroVectorError : public Error {
 public:
  using Error::Error;
};

// Dataset cannot satisfy a sampling request.
class DataError : public Error {
 public:
  using Error::Error;
};

// Binary file errors.
class FormatError : public Error {
 public:
  using Error::Error;
};

class TruncatedError : public FormatError {
 public:
  TruncatedError(const std::string& what, std::size_t offset)
      : FormatError(what + " (truncated at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class IntegrityError : public FormatError {
 public:
  using FormatError::FormatError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hycal
