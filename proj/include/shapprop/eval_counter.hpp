#pragma once

#include <atomic>

namespace shapprop {

/// Running total of forward-equivalent network evaluations.
/// One deterministic forward = 1, one gradient pass = 1 (so a full input
/// gradient costs 2), one probabilistic tail propagation = 2.
/// Increments are atomic; totals are order-independent because every
/// increment used in this codebase is a small integer, summed exactly
/// in double precision.
class EvalCounter {
 public:
  EvalCounter() : total_(0.0) {}

  void add(double forward_equivalents) {
    double cur = total_.load(std::memory_order_relaxed);
    while (!total_.compare_exchange_weak(cur, cur + forward_equivalents,
                                         std::memory_order_relaxed)) {
    }
  }

  double total() const { return total_.load(std::memory_order_relaxed); }

  void reset() { total_.store(0.0, std::memory_order_relaxed); }

 private:
  std::atomic<double> total_;
};

}  // namespace shapprop
