#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acsm {

/// Root of every exception the engine throws. Mathematical failures of a
/// structure are never thrown; they are reported through Report records.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& expected)
      : Error("syntax error at position " + std::to_string(position) + ": expected " + expected),
        position_(position),
        expected_(expected) {}
  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class UnknownIdentifier : public Error {
 public:
  explicit UnknownIdentifier(const std::string& name)
      : Error("unknown identifier '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

class InvalidPoint : public Error {
 public:
  using Error::Error;
};

class SingularMetric : public Error {
 public:
  using Error::Error;
};

class DegeneratePlane : public Error {
 public:
  using Error::Error;
};

class DegenerateSeed : public Error {
 public:
  using Error::Error;
};

class ExhaustedCandidates : public Error {
 public:
  using Error::Error;
};

class AcsViolated : public Error {
 public:
  using Error::Error;
};

class TorsionPresent : public Error {
 public:
  using Error::Error;
};

class NotHorizontal : public Error {
 public:
  using Error::Error;
};

class DegenerateSection : public Error {
 public:
  using Error::Error;
};

class PreconditionNotMet : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

/// Malformed manifold spec file or run configuration.
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace acsm
