#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace umbilic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point, radius or parameter lies outside the admissible region of the
/// ambient space (e.g. beyond the open hemisphere for K = 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested computation is not defined for this spaceform.
class UnsupportedSpaceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Iterative or discrete machinery failed: degenerate metric, root-finding
/// without bracket, optimizer or flow stall.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class LevelSetError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A curvature or sign hypothesis does not hold; carries the offending grid
/// nodes.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, std::vector<std::size_t> nodes = {})
      : Error(what), nodes_(std::move(nodes)) {}

  const std::vector<std::size_t>& nodes() const noexcept { return nodes_; }

 private:
  std::vector<std::size_t> nodes_;
};

// Formats "message (n nodes: i0, i1, ...)" with at most a handful of indices.
std::string describe_nodes(const std::string& message, const std::vector<std::size_t>& nodes);

}  // namespace umbilic
