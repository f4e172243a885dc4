#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nne {

// Domain failures carry enough context for the CLI to map them onto exit codes.
// Precondition violations use std::invalid_argument directly.

class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class UnclosedVertexError : public std::runtime_error {
 public:
  UnclosedVertexError(const std::string& what, std::size_t vertex, std::uint64_t stream)
      : std::runtime_error(what), vertex_(vertex), stream_(stream) {}
  std::size_t vertex() const noexcept { return vertex_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::size_t vertex_;
  std::uint64_t stream_;
};

class DegenerateSample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nne
