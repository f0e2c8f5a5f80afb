#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace obslab {

using Complex = std::complex<double>;
using IntVec = std::vector<int>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Raised when a numerical certificate cannot be established: a singular
/// Gramian, a violated budget, an under-resolved grid or box leakage.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Volume of the Euclidean ball of radius `radius` in R^m.
inline double ball_volume(int m, double radius) {
  return std::pow(kPi, 0.5 * m) * std::pow(radius, m) / std::tgamma(0.5 * m + 1.0);
}

/// Calls `fn(index)` for every integer vector in [lo, hi]^dim, last axis
/// fastest. Returns the number of visited indices.
inline std::size_t for_each_box_index(int dim, int lo, int hi,
                                      const std::function<void(const IntVec&)>& fn) {
  if (dim <= 0 || hi < lo) return 0;
  IntVec index(static_cast<std::size_t>(dim), lo);
  std::size_t count = 0;
  while (true) {
    fn(index);
    ++count;
    int axis = dim - 1;
    while (axis >= 0 && index[static_cast<std::size_t>(axis)] == hi) {
      index[static_cast<std::size_t>(axis)] = lo;
      --axis;
    }
    if (axis < 0) break;
    ++index[static_cast<std::size_t>(axis)];
  }
  return count;
}

/// Worker count used when callers pass 0 threads.
inline unsigned default_thread_count() {
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Static block partition of [0, n) across at most `threads` workers.
/// `fn` must only write to disjoint, per-index state.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      workers.emplace_back([begin, end, &fn, &slot = errors[w]] {
        try {
          for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
          slot = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace obslab
