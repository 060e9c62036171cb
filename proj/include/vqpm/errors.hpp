#pragma once

#include <stdexcept>
#include <string>

namespace vqpm {

/// Thrown when an operation would exceed a configured size cap, e.g. brute
/// force enumeration or state allocation beyond the supported qubit count.
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a qubit is collapsed onto an outcome of zero probability.
class InvalidCollapseError : public std::runtime_error {
 public:
  explicit InvalidCollapseError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when both rounded marginals of a free qubit are zero, so no
/// normalized single-qubit state can be formed from them.
class DegenerateMarginalError : public std::runtime_error {
 public:
  explicit DegenerateMarginalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vqpm
