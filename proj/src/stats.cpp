#include "ppp/stats.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "ppp/util.hpp"

namespace ppp {

namespace {

OmegaSeriesPoint make_point(std::size_t q, std::uint64_t gamma,
                            std::uint64_t omega_big,
                            std::uint64_t omega_little) {
  OmegaSeriesPoint pt;
  pt.q = q;
  pt.gamma = gamma;
  pt.omega_big = omega_big;
  pt.omega_little = omega_little;
  if (q >= 3) {
    pt.prediction = static_cast<double>(divisor_count(gamma)) *
                    static_cast<double>(q) *
                    std::log(std::log(static_cast<double>(q)));
    pt.ratio_big = static_cast<double>(omega_big) / pt.prediction;
    pt.ratio_little = static_cast<double>(omega_little) / pt.prediction;
  } else {
    pt.prediction = std::numeric_limits<double>::quiet_NaN();
    pt.ratio_big = std::numeric_limits<double>::quiet_NaN();
    pt.ratio_little = std::numeric_limits<double>::quiet_NaN();
  }
  return pt;
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> omega_T(std::size_t q,
                                                std::uint64_t gamma,
                                                FactorCache* cache,
                                                const FactorBudget& budget) {
  if (q == 0) throw std::invalid_argument("omega_T: q must be >= 1");
  FactorCache local;
  FactorCache& c = cache ? *cache : local;
  auto primes = first_primes(q);
  std::map<BigInt, std::uint64_t> merged;
  std::uint64_t omega_big = 0;
  for (std::uint64_t p : primes) {
    PrimeFactorization f =
        c.pumped_prime(BigInt(static_cast<unsigned long>(p)), gamma, budget);
    for (const auto& [pr, e] : f.factors) {
      merged[pr] += e;
      omega_big += e;
    }
  }
  return {omega_big, static_cast<std::uint64_t>(merged.size())};
}

ScanResult halberstam_scan(std::size_t q_max, std::uint64_t gamma,
                           std::size_t step, FactorCache* cache,
                           const FactorBudget& budget, int threads) {
  if (step < 1 || q_max < step) {
    throw std::invalid_argument("halberstam_scan: need q_max >= step >= 1");
  }
  FactorCache local;
  FactorCache& c = cache ? *cache : local;
  auto primes = first_primes(q_max);
  if (threads > 1) {
    // warm the cache in parallel; budget failures resurface in order below
    parallel_for(primes.size(), threads, [&](std::size_t i) {
      try {
        c.pumped_prime(BigInt(static_cast<unsigned long>(primes[i])), gamma,
                       budget);
      } catch (const BudgetExceeded&) {
      }
    });
  }
  ScanResult out;
  std::map<BigInt, std::uint64_t> merged;
  std::uint64_t omega_big = 0;
  std::size_t done = 0;
  for (std::size_t q = step; q <= q_max; q += step) {
    try {
      while (done < q) {
        PrimeFactorization f = c.pumped_prime(
            BigInt(static_cast<unsigned long>(primes[done])), gamma, budget);
        for (const auto& [pr, e] : f.factors) {
          merged[pr] += e;
          omega_big += e;
        }
        ++done;
      }
    } catch (const BudgetExceeded&) {
      out.truncated = true;
      return out;
    }
    out.points.push_back(make_point(q, gamma, omega_big,
                                    static_cast<std::uint64_t>(merged.size())));
  }
  return out;
}

std::vector<RankTracePoint> rank_trace(const PumpTrace& trace) {
  std::vector<RankTracePoint> out;
  out.reserve(trace.steps.size());
  for (const PumpStep& s : trace.steps) {
    out.push_back({s.index, s.rank, s.kernel_dim, s.q_after, trace.n});
  }
  return out;
}

std::string omega_series_csv(const std::vector<OmegaSeriesPoint>& points) {
  std::ostringstream os;
  os << "q,gamma,omega_big,omega_little,prediction,ratio_big,ratio_little\n";
  os.setf(std::ios::fixed);
  os.precision(6);
  for (const OmegaSeriesPoint& p : points) {
    os << p.q << ',' << p.gamma << ',' << p.omega_big << ',' << p.omega_little
       << ',' << p.prediction << ',' << p.ratio_big << ',' << p.ratio_little
       << '\n';
  }
  return os.str();
}

}  // namespace ppp
