#pragma once

#include <stdexcept>
#include <string>

namespace qhatm {

/// Base of every domain/numeric failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GammaDomainError : public Error {
 public:
  explicit GammaDomainError(double argument)
      : Error("gamma: argument must be positive, got " + std::to_string(argument)),
        argument_(argument) {}

  double argument() const noexcept { return argument_; }

 private:
  double argument_;
};

class CatalogMismatch : public Error {
 public:
  CatalogMismatch() : Error("series belong to different factor catalogs") {}
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A Caputo derivative produced (or was fed) a negative exponent.
class ExponentUnderflow : public Error {
 public:
  using Error::Error;
};

class MissingCoordinate : public Error {
 public:
  explicit MissingCoordinate(const std::string& name)
      : Error("missing coordinate '" + name + "'") {}
};

/// Malformed or inconsistent problem definition.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside what a problem admits (e.g. order outside its range).
class ParamError : public Error {
 public:
  using Error::Error;
};

}  // namespace qhatm
