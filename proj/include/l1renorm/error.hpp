#pragma once

#include <stdexcept>
#include <string>

namespace l1renorm {

/// Base class of everything the library throws.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed external input (JSON, rational strings, flag values).
class parse_error : public error {
 public:
  using error::error;
};

/// A documented precondition of an operation was violated by the caller.
class precondition_error : public error {
 public:
  using error::error;
};

/// A requested refinement would exceed the dense-storage level cap.
class level_overflow : public precondition_error {
 public:
  explicit level_overflow(int requested, int cap)
      : precondition_error("level " + std::to_string(requested) +
                           " exceeds the maximum level " + std::to_string(cap)),
        requested_(requested) {}

  int requested() const noexcept { return requested_; }

 private:
  int requested_;
};

/// Not enough dyadic cells to place the requested disjoint supports.
class capacity_error : public precondition_error {
 public:
  using precondition_error::precondition_error;
};

/// The separation guarantee of the diameter-two construction cannot be met.
/// The message names the failing inequality with its exact values.
class gap_condition_error : public error {
 public:
  using error::error;
};

/// A finite epsilon schedule cannot satisfy the required product bounds.
class schedule_infeasible : public error {
 public:
  explicit schedule_infeasible(std::size_t k, const std::string& what)
      : error(what), index_(k) {}

  /// 1-based index of the first delta that cannot be honoured.
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace l1renorm
