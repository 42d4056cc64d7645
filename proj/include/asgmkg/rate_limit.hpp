#pragma once

#include <chrono>
#include <mutex>

namespace asgmkg {

// Blocking token bucket, shared by every client of one role.
class TokenBucket {
 public:
  using Clock = std::chrono::steady_clock;

  // rate <= 0 disables limiting.
  explicit TokenBucket(double rate_per_second, double burst = 1.0);

  void acquire();
  // Non-blocking variant; returns whether a token was taken.
  bool try_acquire();

 private:
  void refill(Clock::time_point now);

  std::mutex mutex_;
  double rate_;
  double burst_;
  double tokens_;
  Clock::time_point last_;
};

}  // namespace asgmkg
