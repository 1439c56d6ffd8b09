#include "ppp/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "ppp/util.hpp"

namespace ppp {

namespace {

constexpr std::uint64_t kTrialBound = 100000;

std::vector<std::uint64_t> sieve(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  if (bound <= 2) return out;
  std::vector<bool> comp(bound, false);
  for (std::uint64_t i = 2; i < bound; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j < bound; j += i) comp[j] = true;
  }
  return out;
}

// n - 1 = d * 2^r with d odd; true if a proves n composite.
bool mr_witness(const BigInt& n, const BigInt& a, const BigInt& d,
                unsigned long r) {
  BigInt x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  BigInt nm1 = n - 1;
  if (x == 1 || x == nm1) return false;
  for (unsigned long i = 1; i < r; ++i) {
    x = (x * x) % n;
    if (x == nm1) return false;
  }
  return true;
}

struct FactorWork {
  std::map<BigInt, std::uint64_t>* out;
  Deadline deadline;
  std::uint64_t iter_budget;

  void spend(std::uint64_t iters) {
    if (iters > iter_budget) throw BudgetExceeded("factorization iteration budget exceeded");
    iter_budget -= iters;
    if (deadline.expired()) throw BudgetExceeded("factorization time budget exceeded");
  }
  void add(const BigInt& p, std::uint64_t mult) { (*out)[p] += mult; }
};

// Brent cycle detection; returns a nontrivial divisor of odd composite n,
// or n itself when this c stalls (caller retries with another c).
BigInt rho_brent(const BigInt& n, unsigned long c, FactorWork& work) {
  BigInt y = 2, x, ys, q = 1, g = 1, diff;
  std::uint64_t r = 1;
  const std::uint64_t batch = 128;
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      std::uint64_t lim = std::min(batch, r - k);
      for (std::uint64_t i = 0; i < lim; ++i) {
        y = (y * y + c) % n;
        diff = x - y;
        mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
        q = (q * diff) % n;
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += lim;
      work.spend(lim);
    }
    r <<= 1;
  }
  if (g == n) {
    // backtrack one step at a time
    do {
      ys = (ys * ys + c) % n;
      diff = x - ys;
      mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      work.spend(1);
    } while (g == 1);
  }
  return g;
}

// n has no prime factor below kTrialBound.
void split(const BigInt& n, std::uint64_t mult, FactorWork& work) {
  if (n == 1) return;
  if (is_prime(n)) {
    work.add(n, mult);
    return;
  }
  if (mpz_perfect_power_p(n.get_mpz_t())) {
    std::uint64_t bits = bit_length(n);
    for (std::uint64_t k = 2; k <= bits; ++k) {
      BigInt root;
      if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
        split(root, mult * k, work);
        return;
      }
    }
  }
  for (unsigned long c = 1;; ++c) {
    if (c > 64) throw BudgetExceeded("pollard rho stalled");
    BigInt d = rho_brent(n, c, work);
    if (d == n || d == 1) continue;
    split(d, mult, work);
    split(n / d, mult, work);
    return;
  }
}

}  // namespace

BigInt PrimeFactorization::value() const {
  BigInt v = 1;
  BigInt pw;
  for (const auto& [p, e] : factors) {
    mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), e);
    v *= pw;
  }
  return v;
}

void PrimeFactorization::merge(const PrimeFactorization& other,
                               std::uint64_t multiplicity) {
  for (const auto& [p, e] : other.factors) factors[p] += e * multiplicity;
}

const std::vector<std::uint64_t>& small_primes() {
  static const std::vector<std::uint64_t> ps = sieve(kTrialBound);
  return ps;
}

std::vector<std::uint64_t> primes_below(std::uint64_t bound) {
  return sieve(bound);
}

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  static const unsigned long small[] = {2,  3,  5,  7,  11, 13,
                                        17, 19, 23, 29, 31, 37};
  for (unsigned long p : small) {
    if (mpz_cmp_ui(n.get_mpz_t(), p) == 0) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  BigInt d = n - 1;
  unsigned long r = static_cast<unsigned long>(mpz_scan1(d.get_mpz_t(), 0));
  d >>= r;
  // The 12 witnesses above are a complete test below 3.3e24 > 2^64.
  for (unsigned long p : small) {
    if (mr_witness(n, BigInt(p), d, r)) return false;
  }
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) return true;
  // 64 extra rounds with bases derived deterministically from n.
  Rng rng(mpz_fdiv_ui(n.get_mpz_t(), 0xffffffffffc5ULL) ^
          (static_cast<std::uint64_t>(mpz_sizeinbase(n.get_mpz_t(), 2)) << 48));
  BigInt span = n - 3;  // bases in [2, n-2]
  std::size_t words = mpz_size(span.get_mpz_t()) + 1;
  for (int i = 0; i < 64; ++i) {
    // random bits mod span; the modulo bias is negligible at this size
    BigInt a = 0;
    for (std::size_t w = 0; w < words; ++w) {
      a <<= 32;
      a += static_cast<unsigned long>(rng.next_u64() & 0xffffffffULL);
      a <<= 32;
      a += static_cast<unsigned long>(rng.next_u64() & 0xffffffffULL);
    }
    a = a % span + 2;
    if (mr_witness(n, a, d, r)) return false;
  }
  return true;
}

PrimeFactorization factorize(const BigInt& n, const FactorBudget& budget) {
  if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
  PrimeFactorization out;
  if (n == 1) return out;
  FactorWork work{&out.factors,
                  Deadline::after_seconds(budget.time_limit_seconds),
                  budget.max_rho_iterations};
  BigInt rest = n;
  std::uint64_t checked = 0;
  for (std::uint64_t p : small_primes()) {
    if (rest == 1) break;
    if (mpz_cmp_ui(rest.get_mpz_t(), p * p) < 0) break;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      std::uint64_t e = 0;
      do {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        ++e;
      } while (mpz_divisible_ui_p(rest.get_mpz_t(), p));
      out.factors[BigInt(static_cast<unsigned long>(p))] = e;
    }
    if ((++checked & 0xfff) == 0) work.spend(0);
  }
  if (rest > 1) {
    if (mpz_cmp_ui(rest.get_mpz_t(), kTrialBound * kTrialBound) < 0) {
      // below the trial square the cofactor must be prime
      out.factors[rest] += 1;
    } else {
      split(rest, 1, work);
    }
  }
  return out;
}

std::vector<std::uint64_t> first_primes(std::size_t q) {
  if (q == 0) throw std::invalid_argument("first_primes: q must be >= 1");
  double qd = static_cast<double>(q);
  std::uint64_t bound =
      q < 6 ? 15
            : static_cast<std::uint64_t>(qd * (std::log(qd) + std::log(std::log(qd)))) + 16;
  for (;;) {
    auto ps = sieve(bound);
    if (ps.size() >= q) {
      ps.resize(q);
      return ps;
    }
    bound += bound / 2;
  }
}

std::uint64_t big_omega(const PrimeFactorization& f) {
  std::uint64_t s = 0;
  for (const auto& [p, e] : f.factors) s += e;
  return s;
}

std::uint64_t little_omega(const PrimeFactorization& f) {
  return f.factors.size();
}

namespace {
// trial-division factorization of a machine word
std::vector<std::pair<std::uint64_t, std::uint64_t>> factor_u64(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> fs;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    std::uint64_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    fs.emplace_back(p, e);
  }
  if (n > 1) fs.emplace_back(n, 1);
  return fs;
}
}  // namespace

std::uint64_t divisor_count(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("divisor_count: n must be >= 1");
  std::uint64_t c = 1;
  for (auto [p, e] : factor_u64(n)) c *= e + 1;
  return c;
}

std::uint64_t totient(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("totient: n must be >= 1");
  std::uint64_t t = n;
  for (auto [p, e] : factor_u64(n)) t -= t / p;
  return t;
}

std::vector<std::uint64_t> divisors_of(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("divisors_of: n must be >= 1");
  std::vector<std::uint64_t> ds{1};
  for (auto [p, e] : factor_u64(n)) {
    std::size_t base = ds.size();
    std::uint64_t pw = 1;
    for (std::uint64_t i = 1; i <= e; ++i) {
      pw *= p;
      for (std::size_t j = 0; j < base; ++j) ds.push_back(ds[j] * pw);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

BigInt cyclotomic_eval(std::uint64_t d, const BigInt& x) {
  if (d == 0) throw std::invalid_argument("cyclotomic_eval: d must be >= 1");
  if (x < 2) throw std::invalid_argument("cyclotomic_eval: x must be >= 2");
  // Phi_e(x) = (x^e - 1) / prod_{f | e, f < e} Phi_f(x), exact at every step
  auto ds = divisors_of(d);
  std::map<std::uint64_t, BigInt> phi;
  for (std::uint64_t e : ds) {
    BigInt num;
    mpz_pow_ui(num.get_mpz_t(), x.get_mpz_t(), e);
    num -= 1;
    for (std::uint64_t f : divisors_of(e)) {
      if (f == e) continue;
      mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), phi.at(f).get_mpz_t());
    }
    phi.emplace(e, std::move(num));
  }
  return phi.at(d);
}

std::uint64_t bit_length(const BigInt& n) {
  return static_cast<std::uint64_t>(mpz_sizeinbase(n.get_mpz_t(), 2));
}

namespace {

ZetaResult make_interval_result(double lo, double hi, std::uint64_t terms) {
  ZetaResult r;
  r.lower = lo;
  r.upper = hi;
  r.value = 0.5 * (lo + hi);
  r.error = 0.5 * (hi - lo);
  r.terms = terms;
  return r;
}

void check_zeta_args(std::uint64_t gamma, double tol) {
  if (gamma < 2) throw std::invalid_argument("zeta: gamma must be >= 2 (product diverges at 1)");
  if (!(tol > 0.0)) throw std::invalid_argument("zeta: tol must be positive");
}

}  // namespace

ZetaResult zeta(std::uint64_t gamma, double tol) {
  check_zeta_args(gamma, tol);
  const double g = static_cast<double>(gamma);
  std::uint64_t n = std::max<std::uint64_t>(
      8, static_cast<std::uint64_t>(std::pow(1.0 / tol, 1.0 / g)) + 2);
  for (;;) {
    // sum ascending in magnitude (n down to 1) with compensation
    double sum = 0.0, comp = 0.0;
    for (std::uint64_t i = n; i >= 1; --i) {
      double term = std::pow(static_cast<double>(i), -g);
      double y = term - comp;
      double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    // integral sandwich of the remainder: (N+1)^{1-g}/(g-1) <= R <= N^{1-g}/(g-1)
    double tail_hi = std::pow(static_cast<double>(n), 1.0 - g) / (g - 1.0);
    double tail_lo = std::pow(static_cast<double>(n + 1), 1.0 - g) / (g - 1.0);
    double slop = 8.0 * std::numeric_limits<double>::epsilon() * (sum + tail_hi) +
                  4.0 * std::numeric_limits<double>::denorm_min();
    double lo = Interval::down(sum + tail_lo - slop);
    double hi = Interval::up(sum + tail_hi + slop);
    ZetaResult r = make_interval_result(lo, hi, n);
    if (r.error <= tol) return r;
    if (n > (1ULL << 27)) {
      throw std::invalid_argument("zeta: requested tolerance not reachable");
    }
    n *= 2;
  }
}

ZetaResult zeta_euler(std::uint64_t gamma, double tol) {
  check_zeta_args(gamma, tol);
  const double g = static_cast<double>(gamma);
  const double c = 1.0 / (1.0 - std::pow(2.0, -g));
  std::uint64_t limit = 64;
  for (;;) {
    // ln of the dropped factor is at most c * P^{1-g} / (g-1)
    double log_tail =
        c * std::pow(static_cast<double>(limit), 1.0 - g) / (g - 1.0);
    if (std::expm1(log_tail) < tol * 0.5 || limit > (1ULL << 27)) {
      auto ps = primes_below(limit);
      Interval prod{1.0, 1.0};
      for (std::uint64_t p : ps) {
        double f = 1.0 / (1.0 - std::pow(static_cast<double>(p), -g));
        // f carries up to ~3 ulp from pow/sub/div; widen by 4 each way
        Interval fi{f, f};
        for (int w = 0; w < 4; ++w) {
          fi.lo = Interval::down(fi.lo);
          fi.hi = Interval::up(fi.hi);
        }
        prod = prod.mul(fi);
      }
      double hi = Interval::up(prod.hi * std::exp(log_tail));
      ZetaResult r = make_interval_result(prod.lo, hi, ps.size());
      if (r.error <= tol) return r;
      if (limit > (1ULL << 27)) {
        throw std::invalid_argument(
            "zeta_euler: requested tolerance not reachable at this prime limit");
      }
    }
    limit *= 2;
  }
}

}  // namespace ppp
