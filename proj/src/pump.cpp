#include "ppp/pump.hpp"

#include <cmath>
#include <sstream>

#include "ppp/util.hpp"

namespace ppp {

const char* to_string(PumpStop s) {
  switch (s) {
    case PumpStop::Completed: return "completed";
    case PumpStop::PrimeCountReached: return "prime-count-reached";
    case PumpStop::BitBudget: return "bit-budget";
    case PumpStop::FactorBudget: return "factor-budget";
  }
  return "unknown";
}

PrimeFactorization FactorCache::pumped_prime(const BigInt& p,
                                             std::uint64_t gamma,
                                             const FactorBudget& budget) {
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = cache_.find({p, gamma});
    if (it != cache_.end()) return it->second;
  }
  // split p^gamma - 1 into cyclotomic values, factor each
  PrimeFactorization out;
  for (std::uint64_t d : divisors_of(gamma)) {
    BigInt phi = cyclotomic_eval(d, p);
    if (phi == 1) continue;
    out.merge(factorize(phi, budget));
  }
  std::lock_guard<std::mutex> lk(mu_);
  cache_.emplace(std::make_pair(p, gamma), out);
  return out;
}

std::size_t FactorCache::size() const {
  std::lock_guard<std::mutex> lk(mu_);
  return cache_.size();
}

PrimeFactorization pump_factorization(const PrimeFactorization& f,
                                      std::uint64_t gamma, FactorCache* cache,
                                      const FactorBudget& budget) {
  if (gamma < 2) throw std::invalid_argument("pump: gamma must be >= 2");
  FactorCache local;
  FactorCache& c = cache ? *cache : local;
  PrimeFactorization out;
  for (const auto& [p, e] : f.factors) {
    out.merge(c.pumped_prime(p, gamma, budget), e);
  }
  return out;
}

ExponentMatrix pump_once(const ExponentMatrix& m, std::uint64_t gamma,
                         FactorCache* cache, const FactorBudget& budget,
                         int threads) {
  if (gamma < 2) throw std::invalid_argument("pump: gamma must be >= 2");
  FactorCache local;
  FactorCache& c = cache ? *cache : local;
  std::vector<PrimeFactorization> pumped(m.rows);
  parallel_for(m.rows, threads, [&](std::size_t i) {
    try {
      PrimeFactorization row;
      for (std::size_t k = 0; k < m.cols; ++k) {
        std::int64_t e = m.at(i, k);
        if (e == 0) continue;
        row.merge(c.pumped_prime(m.primes[k], gamma, budget),
                  static_cast<std::uint64_t>(e));
      }
      pumped[i] = std::move(row);
    } catch (const BudgetExceeded& e) {
      throw BudgetExceeded(std::string(e.what()) + " (row index " +
                           std::to_string(i) + ")");
    }
  });
  return assemble_matrix(std::move(pumped));
}

std::pair<ExponentMatrix, PumpTrace> pump_iterate(const ExponentMatrix& m,
                                                  const PumpConfig& config,
                                                  FactorCache* cache) {
  PumpTrace trace;
  trace.gamma = config.gamma;
  trace.n = m.rows;
  ExponentMatrix cur = m;
  FactorCache local;
  FactorCache& c = cache ? *cache : local;

  ZetaResult z = zeta(config.gamma, 1e-12);
  Interval zi{z.lower, z.upper};

  for (std::size_t k = 1; k <= config.k_max; ++k) {
    // bits(p^gamma - 1) <= gamma * bits(p), so the worst case is predictable
    if (cur.max_prime_bits() * config.gamma > config.bit_budget) {
      trace.stop = PumpStop::BitBudget;
      return {cur, trace};
    }
    Stopwatch watch;
    PumpStep step;
    step.index = k;
    step.q_before = cur.cols;
    step.big_omega_before = cur.total_big_omega();
    ExponentMatrix next;
    try {
      next = pump_once(cur, config.gamma, &c, config.factor_budget,
                       config.threads);
    } catch (const BudgetExceeded&) {
      trace.stop = PumpStop::FactorBudget;
      return {cur, trace};
    }
    cur = std::move(next);
    step.q_after = cur.cols;
    step.big_omega_after = cur.total_big_omega();
    step.rank = rank_exact(cur);
    step.kernel_dim = cur.rows - step.rank;
    step.max_prime_bits = cur.max_prime_bits();
    Interval bounds = zi.pow_u(2 * k);
    step.ratio_lower = Interval::down(1.0 / bounds.hi);
    step.ratio_upper = bounds.hi;
    step.seconds = watch.seconds();
    trace.steps.push_back(step);
    // the prime-count goal is a post-step stop: a caller that wants the
    // identity passes k_max = 0
    if (cur.cols >= cur.rows) {
      trace.stop = PumpStop::PrimeCountReached;
      return {cur, trace};
    }
  }
  trace.stop = PumpStop::Completed;
  return {cur, trace};
}

std::pair<double, double> ratio_bounds(std::uint64_t gamma, std::uint64_t K) {
  if (gamma < 2) throw std::invalid_argument("ratio_bounds: gamma must be >= 2");
  if (K == 0) return {1.0, 1.0};
  ZetaResult z = zeta(gamma, 1e-13);
  Interval zi{z.lower, z.upper};
  Interval up = zi.pow_u(2 * K);
  return {Interval::down(1.0 / up.hi), up.hi};
}

std::uint64_t select_gamma(double epsilon, std::uint64_t K) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("select_gamma: epsilon must be positive");
  if (K == 0) throw std::invalid_argument("select_gamma: K must be >= 1");
  for (std::uint64_t bound = 64;; bound *= 2) {
    for (std::uint64_t g : primes_below(bound)) {
      ZetaResult z = zeta(g, 1e-13);
      Interval up = Interval{z.lower, z.upper}.pow_u(2 * K);
      if (up.hi <= 1.0 + epsilon) return g;
    }
    // zeta(gamma) -> 1, so some prime in the next range certifies
  }
}

double estimate_K(double a, std::uint64_t q) {
  if (a < 1.0) throw std::invalid_argument("estimate_K: a must be >= 1");
  double lll = std::log(std::log(std::log(static_cast<double>(q))));
  if (!(lll > 0.0)) {
    throw std::invalid_argument("estimate_K: log log log q must be positive (q >= 16)");
  }
  return (a - 1.0) * std::log(static_cast<double>(q)) /
         (std::log(2.0) + lll);
}

std::string pump_trace_csv(const PumpTrace& t) {
  std::ostringstream os;
  os << "step,gamma,q_before,q_after,big_omega_before,big_omega_after,rank,"
        "kernel_dim,max_prime_bits,ratio_lower,ratio_upper,seconds\n";
  os.setf(std::ios::fixed);
  for (const PumpStep& s : t.steps) {
    os.precision(12);
    os << s.index << ',' << t.gamma << ',' << s.q_before << ',' << s.q_after
       << ',' << s.big_omega_before << ',' << s.big_omega_after << ','
       << s.rank << ',' << s.kernel_dim << ',' << s.max_prime_bits << ',';
    os << s.ratio_lower << ',' << s.ratio_upper << ',';
    os.precision(6);
    os << s.seconds << '\n';
  }
  return os.str();
}

}  // namespace ppp
