#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppp {

using BigInt = mpz_class;

/// Thrown when a factorization exceeds its configured wall-clock or
/// iteration budget. Callers treat it as a first-class result (abort the
/// pump step, mark the report), never as a crash.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FactorBudget {
  double time_limit_seconds = 0.0;          // 0 = unlimited
  std::uint64_t max_rho_iterations = 1ULL << 34;
};

/// Complete factorization: prime -> exponent, keys ascending.
/// The factorization of 1 is the empty map.
struct PrimeFactorization {
  std::map<BigInt, std::uint64_t> factors;

  BigInt value() const;
  void merge(const PrimeFactorization& other, std::uint64_t multiplicity = 1);
  bool operator==(const PrimeFactorization&) const = default;
};

/// Deterministic Miller-Rabin below 2^64, 64 extra pseudo-random rounds
/// above (error < 2^-128). n < 2 returns false.
bool is_prime(const BigInt& n);

/// Trial division below 1e5, then Brent's variant of Pollard rho with
/// perfect-power splitting. Requires n >= 1; throws BudgetExceeded when
/// the budget runs out.
PrimeFactorization factorize(const BigInt& n, const FactorBudget& budget = {});

/// First q primes, ascending, starting at 2.
std::vector<std::uint64_t> first_primes(std::size_t q);

/// All primes < bound, ascending.
const std::vector<std::uint64_t>& small_primes();  // primes below 1e5
std::vector<std::uint64_t> primes_below(std::uint64_t bound);

std::uint64_t big_omega(const PrimeFactorization& f);     // with multiplicity
std::uint64_t little_omega(const PrimeFactorization& f);  // distinct primes

std::uint64_t divisor_count(std::uint64_t n);  // sigma_0
std::uint64_t totient(std::uint64_t n);        // Euler phi
std::vector<std::uint64_t> divisors_of(std::uint64_t n);  // ascending

/// Value of the d-th cyclotomic polynomial at x (exact; divisor recursion
/// over exact integer division). Requires d >= 1, x >= 2.
BigInt cyclotomic_eval(std::uint64_t d, const BigInt& x);

std::uint64_t bit_length(const BigInt& n);  // bits of |n|, n >= 1

/// Certified zeta evaluation: [lower, upper] is guaranteed to contain
/// zeta(gamma); value is the midpoint and error the half-width (<= tol).
struct ZetaResult {
  double value = 0.0;
  double error = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::uint64_t terms = 0;  // series terms or primes consumed
};

/// Dirichlet series with integral tail bounds. Requires gamma >= 2, tol > 0.
ZetaResult zeta(std::uint64_t gamma, double tol);

/// Euler product over primes with a tail majorization. Same contract; the
/// reachable tolerance is coarser for small gamma (prime limit is capped).
ZetaResult zeta_euler(std::uint64_t gamma, double tol);

}  // namespace ppp
