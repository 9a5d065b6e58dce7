#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace motionfeas {

// Base class for every error the library reports. Callers that only care
// about "did scoring fail" can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TooFewFramesError : public Error {
 public:
  TooFewFramesError(std::size_t have, std::size_t need)
      : Error("too few frames: have " + std::to_string(have) + ", need " +
              std::to_string(need)) {}
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class MissingFootGeometryError : public Error {
 public:
  using Error::Error;
};

class MissingLimitsError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class MissingScoreError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  static constexpr std::size_t kNoOffset = static_cast<std::size_t>(-1);

  // Structural problems found after the bytes were read successfully.
  explicit ParseError(const std::string& what) : Error(what), byte_offset_(kNoOffset) {}
  ParseError(const std::string& what, std::size_t byte_offset)
      : Error(what + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

}  // namespace motionfeas
