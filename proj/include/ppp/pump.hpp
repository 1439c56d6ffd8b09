#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "ppp/matrix.hpp"
#include "ppp/numtheory.hpp"

namespace ppp {

struct PumpConfig {
  std::uint64_t gamma = 3;        // prime in the intended regime; nonprime works, flagged
  std::size_t k_max = 1;
  double epsilon = 0.0;           // informational; used when gamma is auto-selected
  std::uint64_t bit_budget = 4096;  // max bit length of any pumped prime
  double growth_exponent_a = 2.0;   // n ~ q^a, only for estimate_K
  FactorBudget factor_budget{};
  int threads = 1;
};

enum class PumpStop {
  Completed,          // did k_max steps
  PrimeCountReached,  // q >= n
  BitBudget,          // next step would exceed the prime bit budget
  FactorBudget,       // a factorization ran out of budget
};

const char* to_string(PumpStop s);

struct PumpStep {
  std::size_t index = 0;  // 1-based
  std::size_t q_before = 0;
  std::size_t q_after = 0;
  std::uint64_t big_omega_before = 0;
  std::uint64_t big_omega_after = 0;
  std::size_t rank = 0;        // exact rank after the step
  std::size_t kernel_dim = 0;  // n - rank
  std::uint64_t max_prime_bits = 0;
  double ratio_lower = 1.0;  // cumulative certified bounds, zeta(gamma)^(+-2k)
  double ratio_upper = 1.0;
  double seconds = 0.0;
};

struct PumpTrace {
  std::uint64_t gamma = 0;
  std::size_t n = 0;
  PumpStop stop = PumpStop::Completed;
  std::vector<PumpStep> steps;

  bool truncated() const {
    return stop == PumpStop::BitBudget || stop == PumpStop::FactorBudget;
  }
};

/// Memoized factorizations of p^gamma - 1, keyed by (p, gamma). Pumped
/// values recur across rows and steps; factoring dominates the cost.
/// Thread-safe; duplicate concurrent computations are wasted work, not errors.
class FactorCache {
 public:
  PrimeFactorization pumped_prime(const BigInt& p, std::uint64_t gamma,
                                  const FactorBudget& budget = {});
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::pair<BigInt, std::uint64_t>, PrimeFactorization> cache_;
};

/// Factorization of prod_p (p^gamma - 1)^e over the entries of f. Each
/// p^gamma - 1 is split into cyclotomic values first, then factored.
PrimeFactorization pump_factorization(const PrimeFactorization& f,
                                      std::uint64_t gamma,
                                      FactorCache* cache = nullptr,
                                      const FactorBudget& budget = {});

/// One pump step: every row is pumped, the matrix is rebuilt over the union
/// of the new primes. Row count is unchanged.
ExponentMatrix pump_once(const ExponentMatrix& m, std::uint64_t gamma,
                         FactorCache* cache = nullptr,
                         const FactorBudget& budget = {}, int threads = 1);

/// Repeats pump_once until q >= n, k_max steps, or a budget stop. Budget
/// exhaustion truncates the trace and flags it; it does not throw.
std::pair<ExponentMatrix, PumpTrace> pump_iterate(const ExponentMatrix& m,
                                                  const PumpConfig& config,
                                                  FactorCache* cache = nullptr);

/// Certified [zeta(gamma)^-2K, zeta(gamma)^2K]: side products of any exact
/// original solution drift by at most zeta^K each, so their ratio by zeta^2K.
std::pair<double, double> ratio_bounds(std::uint64_t gamma, std::uint64_t K);

/// Smallest prime gamma with certified zeta(gamma)^2K <= 1 + epsilon.
std::uint64_t select_gamma(double epsilon, std::uint64_t K);

/// (a-1) log q / (log 2 + log log log q), natural logs. Requires a >= 1 and
/// log log log q > 0 (q >= 16).
double estimate_K(double a, std::uint64_t q);

/// Serialized forms of a trace: JSON array text (one object per step) and
/// CSV (one row per step, fixed header).
std::string pump_trace_csv(const PumpTrace& t);

}  // namespace ppp
