#pragma once

#include <stdexcept>
#include <string>

namespace jmm {

class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a derivative of the eikonal is requested at the point source.
class SingularityError : public std::domain_error {
 public:
  explicit SingularityError(const std::string& what) : std::domain_error(what) {}
};

class UnsupportedModel : public std::logic_error {
 public:
  explicit UnsupportedModel(const std::string& what) : std::logic_error(what) {}
};

}  // namespace jmm
