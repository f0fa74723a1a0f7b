#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point or interval outside the domain of the object it was handed to.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Constants or options that violate a stated constraint.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A graph, walk or tower that cannot be built from the given data.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// A computation that would exceed its piece or time budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Brackets too wide to decide a precondition; a deeper tower may settle it.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent blueprint text.
class BlueprintError : public Error {
 public:
  BlueprintError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lel
