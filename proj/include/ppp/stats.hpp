#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ppp/numtheory.hpp"
#include "ppp/pump.hpp"

namespace ppp {

/// One checkpoint of the Omega(T_q) growth scan. prediction is
/// sigma_0(gamma) * q * log log q (natural logs, NaN below q = 3 where the
/// iterated log is nonpositive).
struct OmegaSeriesPoint {
  std::size_t q = 0;
  std::uint64_t gamma = 0;
  std::uint64_t omega_big = 0;
  std::uint64_t omega_little = 0;
  double prediction = 0.0;
  double ratio_big = 0.0;
  double ratio_little = 0.0;
};

/// (Omega, omega) of T_q = prod_{k<=q} (p_k^gamma - 1) over the first q
/// primes: multiplicities summed row-wise, distinct primes over the merged
/// factorization.
std::pair<std::uint64_t, std::uint64_t> omega_T(std::size_t q,
                                                std::uint64_t gamma,
                                                FactorCache* cache = nullptr,
                                                const FactorBudget& budget = {});

struct ScanResult {
  std::vector<OmegaSeriesPoint> points;
  bool truncated = false;  // factorization budget ran out mid-scan
};

/// Points at q = step, 2*step, ..., q_max, computed incrementally. With
/// threads > 1 the per-prime factorizations are precomputed data-parallel
/// into the shared cache; checkpoints merge sequentially either way.
ScanResult halberstam_scan(std::size_t q_max, std::uint64_t gamma,
                           std::size_t step, FactorCache* cache = nullptr,
                           const FactorBudget& budget = {}, int threads = 1);

struct RankTracePoint {
  std::size_t step = 0;
  std::size_t rank = 0;
  std::size_t kernel_dim = 0;
  std::size_t q = 0;
  std::size_t n = 0;
};

/// Per-step rank diagnostics out of a pump trace. Monotonicity is reported,
/// never asserted.
std::vector<RankTracePoint> rank_trace(const PumpTrace& trace);

/// CSV with header q,gamma,omega_big,omega_little,prediction,ratio_big,
/// ratio_little; reals fixed to 6 decimals.
std::string omega_series_csv(const std::vector<OmegaSeriesPoint>& points);

}  // namespace ppp
