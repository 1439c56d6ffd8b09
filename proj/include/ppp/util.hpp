#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ppp {

/// Closed interval [lo, hi] with outward-rounded arithmetic. Every operation
/// widens the result by one ulp per rounding step, so a true value contained
/// in the inputs stays contained in the output.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static double down(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
  }
  static double up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
  }

  static Interval point(double x) { return {x, x}; }

  Interval mul(const Interval& o) const {
    // both operands assumed positive in this codebase
    return {down(lo * o.lo), up(hi * o.hi)};
  }

  Interval inv() const {
    return {down(1.0 / hi), up(1.0 / lo)};
  }

  /// Integer power by repeated squaring, outward at each multiply.
  Interval pow_u(std::uint64_t e) const {
    Interval acc{1.0, 1.0};
    Interval base = *this;
    while (e > 0) {
      if (e & 1) acc = acc.mul(base);
      base = base.mul(base);
      e >>= 1;
    }
    return acc;
  }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// Deterministic RNG used everywhere randomness is needed. Wraps a fixed
/// xoshiro-style generator (std::mt19937_64) but avoids std distributions,
/// whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) { return n ? next_u64() % n : 0; }

  /// Uniform in [lo, hi] inclusive.
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
    return lo + below(hi - lo + 1);
  }

  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

using Clock = std::chrono::steady_clock;

/// Optional wall-clock deadline; absent means unlimited.
class Deadline {
 public:
  Deadline() = default;
  static Deadline after_seconds(double s) {
    Deadline d;
    if (s > 0.0) {
      d.at_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                 std::chrono::duration<double>(s));
    }
    return d;
  }
  bool expired() const { return at_ && Clock::now() >= *at_; }

 private:
  std::optional<Clock::time_point> at_;
};

class Stopwatch {
 public:
  Stopwatch() : start_(Clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

 private:
  Clock::time_point start_;
};

/// Runs fn(i) for i in [0, count). With threads > 1 the indices are pulled
/// from a shared counter; the first exception wins and is rethrown after join.
template <typename F>
void parallel_for(std::size_t count, int threads, F&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t t = std::min<std::size_t>(
      {static_cast<std::size_t>(threads), count, hw ? hw : 4});
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (std::size_t i = 0; i < t; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace ppp
