#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>

namespace crplan {

/// Thrown by planners when their time budget runs out.
class DeadlineExceeded : public std::runtime_error {
 public:
  DeadlineExceeded() : std::runtime_error("time budget exceeded") {}
};

/// Cooperative wall-clock budget. A default-constructed deadline never expires.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(double seconds)
      : end_(Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds))) {}

  bool expired() const { return end_ && Clock::now() >= *end_; }
  void check() const {
    if (expired()) throw DeadlineExceeded();
  }

 private:
  std::optional<Clock::time_point> end_;
};

}  // namespace crplan
