#include "ppp/solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>

#include "ppp/util.hpp"

namespace ppp {

namespace {

constexpr char kWarnUnitEntries[] = "unit-entries";
constexpr char kWarnPumpGeneralization[] = "pump-exponent-generalization";
constexpr char kWarnTraceBitBudget[] = "trace-truncated-bit-budget";
constexpr char kWarnTraceFactorBudget[] = "trace-truncated-factor-budget";
constexpr char kWarnEigenFailure[] = "eigensolver-convergence-failure";
constexpr char kWarnNonprimeGamma[] = "nonprime-gamma";

Eigen::MatrixXd to_dense(const ExponentMatrix& m) {
  Eigen::MatrixXd d(static_cast<Eigen::Index>(m.rows),
                    static_cast<Eigen::Index>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t k = 0; k < m.cols; ++k) {
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          static_cast<double>(m.at(i, k));
    }
  }
  return d;
}

struct Spectral {
  Eigen::MatrixXd gram;
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXd vectors; // columns
  double value_max = 0.0;

  std::size_t near_zero_count(double tol) const {
    double thresh = tol * (value_max + 1.0);
    std::size_t c = 0;
    while (c < static_cast<std::size_t>(values.size()) && values[c] <= thresh) ++c;
    return c;
  }
};

Spectral decompose(Eigen::MatrixXd gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success) {
    throw ConvergenceFailure("symmetric eigendecomposition failed");
  }
  Spectral s;
  s.gram = std::move(gram);
  s.values = es.eigenvalues();
  s.vectors = es.eigenvectors();
  s.value_max = std::max(0.0, s.values[s.values.size() - 1]);
  return s;
}

EigenPair pair_from(const Spectral& s, std::size_t j, double tol) {
  EigenPair p;
  double lambda = s.values[static_cast<Eigen::Index>(j)];
  p.vector = s.vectors.col(static_cast<Eigen::Index>(j));
  p.residual_norm = (s.gram * p.vector - lambda * p.vector).norm();
  double bound = tol * (s.value_max + 1.0);
  if (p.residual_norm > bound || lambda < -bound) {
    throw ConvergenceFailure("eigenpair residual exceeds tolerance");
  }
  p.value = std::max(0.0, lambda);
  return p;
}

/// Verifies candidates exactly against the original instance; remembers the
/// first exact solution and stops accepting once found or out of time.
/// Rejection goes through the doubled integer residual evaluated on the
/// sparse rows (zero iff the products match); accepted vectors additionally
/// pass the direct big-integer product comparison.
class CandidateSink {
 public:
  CandidateSink(const Instance& inst, const ExponentMatrix& base,
                Deadline deadline)
      : inst_(inst), base_(base), deadline_(deadline) {
    sparse_rows_.resize(base.rows);
    for (std::size_t i = 0; i < base.rows; ++i) {
      for (std::size_t k = 0; k < base.cols; ++k) {
        std::int64_t e = base.at(i, k);
        if (e != 0) sparse_rows_[i].emplace_back(k, e);
      }
    }
    column_sums_.resize(base.cols);
    for (std::size_t k = 0; k < base.cols; ++k) {
      column_sums_[k] = base.column_sum(k);
    }
  }

  // returns false once the caller should stop offering
  bool offer(const BitVec& x) {
    if (found_ || expired_) return false;
    if ((++offered_ & 0xff) == 0 && deadline_.expired()) {
      expired_ = true;
      return false;
    }
    if (!seen_.insert(x).second) return true;
    ++tested_;
    if (residual_zero(x) && verify_exact(inst_, x)) {
      solution_ = make_candidate(inst_, base_, x);
      found_ = true;
      return false;
    }
    return true;
  }

  bool found() const { return found_; }
  bool expired() const { return expired_; }
  std::uint64_t tested() const { return tested_; }
  const std::optional<CandidateSolution>& solution() const { return solution_; }

 private:
  bool residual_zero(const BitVec& x) {
    // 2 x'S == 1'S columnwise
    acc_.assign(column_sums_.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!x[i]) continue;
      for (auto [k, e] : sparse_rows_[i]) acc_[k] += 2 * e;
    }
    return acc_ == column_sums_;
  }

  const Instance& inst_;
  const ExponentMatrix& base_;
  Deadline deadline_;
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> sparse_rows_;
  std::vector<std::int64_t> column_sums_;
  std::vector<std::int64_t> acc_;
  std::set<BitVec> seen_;
  std::uint64_t offered_ = 0;
  std::uint64_t tested_ = 0;
  bool found_ = false;
  bool expired_ = false;
  std::optional<CandidateSolution> solution_;
};

/// Sign patterns of y0 + beta*v over the whole beta line: one pattern per
/// interval between breakpoints. For y0 = 0 this degenerates to the two
/// patterns sign(v), sign(-v).
std::vector<BitVec> line_patterns(const Eigen::VectorXd& y0,
                                  const Eigen::VectorXd& v) {
  const auto n = y0.size();
  std::vector<double> breaks;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(v[i]) > 1e-300) breaks.push_back(-y0[i] / v[i]);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<double> betas;
  if (breaks.empty()) {
    betas = {0.0};
  } else {
    betas.push_back(breaks.front() - 1.0);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      betas.push_back(0.5 * (breaks[i] + breaks[i + 1]));
    }
    betas.push_back(breaks.back() + 1.0);
  }
  std::vector<BitVec> out;
  for (double b : betas) {
    BitVec x(static_cast<std::size_t>(n), 0);
    bool ambiguous = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = y0[i] + b * v[i];
      if (c > 0.0) {
        x[static_cast<std::size_t>(i)] = 1;
      } else if (c == 0.0) {
        ambiguous = true;
      }
    }
    out.push_back(x);
    if (ambiguous) {
      BitVec y = x;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (y0[i] + b * v[i] == 0.0) y[static_cast<std::size_t>(i)] = 1;
      }
      out.push_back(y);
    }
  }
  return out;
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::InfeasibleParity: return "infeasible-parity";
    case SolveStatus::NoCandidateVerified: return "no-candidate-verified";
    case SolveStatus::BudgetExceeded: return "budget-exceeded";
  }
  return "unknown";
}

std::vector<EigenPair> gram_spectrum(const ExponentMatrix& m, std::size_t k,
                                     double tol) {
  if (k == 0 || k > m.rows) {
    throw std::invalid_argument("gram_spectrum: need 1 <= k <= n");
  }
  Eigen::MatrixXd d = to_dense(m);
  Spectral s = decompose(d * d.transpose());
  std::vector<EigenPair> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) out.push_back(pair_from(s, j, tol));
  return out;
}

std::size_t kernel_dimension(const ExponentMatrix& m, double tol) {
  Eigen::MatrixXd d = to_dense(m);
  return decompose(d * d.transpose()).near_zero_count(tol);
}

std::vector<BitVec> round_to_corner(const EigenPair& pair, double zero_tol,
                                    int cap_log2) {
  const Eigen::VectorXd& v = pair.vector;
  const std::size_t n = static_cast<std::size_t>(v.size());
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(v[static_cast<Eigen::Index>(i)]) <= zero_tol) zeros.push_back(i);
  }
  const int c = std::clamp(cap_log2, 0, 10);
  const std::size_t enumerated = std::min<std::size_t>(zeros.size(), static_cast<std::size_t>(c));
  const bool excess = zeros.size() > enumerated;

  std::vector<BitVec> out;
  std::set<BitVec> seen;
  for (int base_sign : {+1, -1}) {
    BitVec base(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      double coord = base_sign * v[static_cast<Eigen::Index>(i)];
      base[i] = coord > zero_tol ? 1 : 0;
    }
    for (std::uint64_t mask = 0; mask < (1ULL << enumerated); ++mask) {
      for (int wholesale : {0, 1}) {
        if (!excess && wholesale == 1) continue;
        BitVec x = base;
        for (std::size_t z = 0; z < zeros.size(); ++z) {
          if (z < enumerated) {
            x[zeros[z]] = (mask >> z) & 1;
          } else {
            x[zeros[z]] = static_cast<std::uint8_t>(wholesale);
          }
        }
        if (seen.insert(x).second) out.push_back(x);
      }
    }
  }
  return out;
}

std::vector<std::int64_t> AugmentedSystem::residual(const BitVec& x) const {
  std::vector<std::int64_t> r = ppp::residual(base, x);
  std::int64_t ones = 0;
  for (std::uint8_t b : x) ones += b;
  r.push_back(2 * weight * (ones - static_cast<std::int64_t>(target_ones)));
  return r;
}

Eigen::MatrixXd AugmentedSystem::dense() const {
  Eigen::MatrixXd d(static_cast<Eigen::Index>(base.rows),
                    static_cast<Eigen::Index>(base.cols) + 1);
  d.leftCols(static_cast<Eigen::Index>(base.cols)) = to_dense(base);
  d.col(static_cast<Eigen::Index>(base.cols)).setConstant(static_cast<double>(weight));
  return d;
}

AugmentedSystem cardinality_sweep(const ExponentMatrix& m, std::size_t N) {
  if (N < 1 || N + 1 > m.rows) {
    throw std::invalid_argument("cardinality_sweep: N must lie in [1, n-1]");
  }
  AugmentedSystem a;
  a.base = m;
  a.weight = std::max<std::int64_t>(1, m.max_exponent());
  a.target_ones = N;
  return a;
}

SolveReport solve(const Instance& inst, const SolverConfig& config) {
  SolveReport report;
  Deadline deadline = Deadline::after_seconds(config.time_budget_seconds);
  const std::size_t n = inst.size();

  ExponentMatrix base;
  try {
    base = build_matrix(inst, config.factor_budget, config.threads);
  } catch (const BudgetExceeded& e) {
    report.status = SolveStatus::BudgetExceeded;
    report.error_detail = e.what();
    return report;
  }
  if (!base.unit_rows().empty()) report.warnings.push_back(kWarnUnitEntries);

  if (!parity_feasible(base)) {
    report.status = SolveStatus::InfeasibleParity;
    try {
      report.kernel_dimension = kernel_dimension(base, config.eigen_tol);
    } catch (const ConvergenceFailure&) {
      report.warnings.push_back(kWarnEigenFailure);
    }
    return report;
  }

  ExponentMatrix work = base;
  if (config.pump_enabled && work.cols < work.rows) {
    if (!is_prime(BigInt(static_cast<unsigned long>(config.pump.gamma)))) {
      report.warnings.push_back(kWarnNonprimeGamma);
    }
    FactorCache cache;
    auto [pumped, trace] = pump_iterate(work, config.pump, &cache);
    if (!trace.steps.empty()) {
      report.warnings.push_back(kWarnPumpGeneralization);
    }
    if (trace.stop == PumpStop::BitBudget) {
      report.warnings.push_back(kWarnTraceBitBudget);
    } else if (trace.stop == PumpStop::FactorBudget) {
      report.warnings.push_back(kWarnTraceFactorBudget);
    }
    report.pump_trace = std::move(trace);
    work = std::move(pumped);
  }

  CandidateSink sink(inst, base, deadline);
  Rng rng(config.seed);
  const std::size_t k = std::min<std::size_t>(
      std::max(1, config.spectrum_k), n);

  bool spectral_ok = true;
  Spectral spec;
  try {
    Eigen::MatrixXd d = to_dense(work);
    spec = decompose(d * d.transpose());
  } catch (const ConvergenceFailure&) {
    spectral_ok = false;
    report.warnings.push_back(kWarnEigenFailure);
  }

  if (spectral_ok) {
    report.kernel_dimension = spec.near_zero_count(config.eigen_tol);
    for (std::size_t j = 0; j < k; ++j) {
      report.eigen_spectrum_head.push_back(
          std::max(0.0, spec.values[static_cast<Eigen::Index>(j)]));
    }
    for (std::size_t j = 0; j < k && !sink.found() && !sink.expired(); ++j) {
      EigenPair p;
      try {
        p = pair_from(spec, j, config.eigen_tol);
      } catch (const ConvergenceFailure&) {
        report.warnings.push_back(kWarnEigenFailure);
        break;
      }
      for (const BitVec& x :
           round_to_corner(p, config.zero_tol, config.zero_cap_log2)) {
        if (!sink.offer(x)) break;
      }
    }
    // repeated near-zero eigenvalues: sample the spanned subspace
    std::size_t kd = report.kernel_dimension;
    if (kd >= 2 && !sink.found() && !sink.expired()) {
      for (int s = 0; s < config.kernel_samples && !sink.found() && !sink.expired(); ++s) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < kd; ++j) {
          v += rng.normal() * spec.vectors.col(static_cast<Eigen::Index>(j));
        }
        double norm = v.norm();
        if (norm < 1e-12) continue;
        v /= norm;
        EigenPair p;
        p.vector = v;
        for (const BitVec& x :
             round_to_corner(p, config.zero_tol, config.zero_cap_log2)) {
          if (!sink.offer(x)) break;
        }
      }
    }
  }

  // cardinality sweep: same augmented matrix for every N, only the affine
  // center moves, so decompose once
  if (config.sweep && n >= 2 && spectral_ok && !sink.found() && !sink.expired()) {
    AugmentedSystem aug = cardinality_sweep(work, 1);
    Eigen::MatrixXd a = aug.dense();
    bool aug_ok = true;
    Spectral aspec;
    try {
      aspec = decompose(a * a.transpose());
    } catch (const ConvergenceFailure&) {
      aug_ok = false;
      report.warnings.push_back(kWarnEigenFailure);
    }
    if (aug_ok) {
      // g = pinv(G_A) * 1; y0(N) = w^2 (N - n/2) g solves A' y ~ b(N)
      double thresh = config.eigen_tol * (aspec.value_max + 1.0);
      Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
      Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      for (Eigen::Index j = 0; j < aspec.values.size(); ++j) {
        double lam = aspec.values[j];
        if (lam <= thresh) continue;
        g += (aspec.vectors.col(j).dot(ones) / lam) * aspec.vectors.col(j);
      }
      std::size_t akd = aspec.near_zero_count(config.eigen_tol);
      std::vector<Eigen::VectorXd> directions;
      for (std::size_t j = 0; j < std::min(k, n); ++j) {
        directions.push_back(aspec.vectors.col(static_cast<Eigen::Index>(j)));
      }
      if (akd >= 2) {
        int samples = std::min(config.kernel_samples, 16);
        for (int s = 0; s < samples; ++s) {
          Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
          for (std::size_t j = 0; j < akd; ++j) {
            v += rng.normal() * aspec.vectors.col(static_cast<Eigen::Index>(j));
          }
          double norm = v.norm();
          if (norm >= 1e-12) directions.push_back(v / norm);
        }
      }
      double w = static_cast<double>(aug.weight);
      for (std::size_t N = 1; N + 1 <= n && !sink.found() && !sink.expired(); ++N) {
        Eigen::VectorXd y0 =
            (w * w * (static_cast<double>(N) - 0.5 * static_cast<double>(n))) * g;
        for (const Eigen::VectorXd& v : directions) {
          for (const BitVec& x : line_patterns(y0, v)) {
            if (!sink.offer(x)) break;
          }
          if (sink.found() || sink.expired()) break;
        }
        if (sink.found() && report.solution == std::nullopt) {
          report.cardinality_used = N;
        }
      }
    }
  }

  report.candidates_tested = sink.tested();
  if (sink.found()) {
    report.status = SolveStatus::Solved;
    report.solution = sink.solution();
  } else if (sink.expired()) {
    report.status = SolveStatus::BudgetExceeded;
    report.error_detail = "time budget exhausted during candidate search";
  } else {
    report.status = SolveStatus::NoCandidateVerified;
  }
  auto& w = report.warnings;
  std::vector<std::string> uniq;
  for (auto& code : w) {
    if (std::find(uniq.begin(), uniq.end(), code) == uniq.end()) {
      uniq.push_back(code);
    }
  }
  w = std::move(uniq);
  return report;
}

std::optional<BitVec> brute_force_oracle(const Instance& inst,
                                         std::size_t cap) {
  const std::size_t n = inst.size();
  if (n > cap || n > 63) {
    throw std::invalid_argument("brute_force_oracle: instance size exceeds cap");
  }
  // index 0 stays on the selected side; gray-code walk over the rest
  BitVec x(n, 0);
  x[0] = 1;
  BigInt in = inst.entries[0], out = 1;
  for (std::size_t i = 1; i < n; ++i) out *= inst.entries[i];
  if (in == out) return x;
  const std::uint64_t total = n >= 1 ? (1ULL << (n - 1)) : 1;
  std::uint64_t gray = 0;
  for (std::uint64_t g = 1; g < total; ++g) {
    std::uint64_t next_gray = g ^ (g >> 1);
    std::uint64_t changed = gray ^ next_gray;
    gray = next_gray;
    std::size_t idx = 1;
    while (!(changed & 1)) {
      changed >>= 1;
      ++idx;
    }
    const BigInt& e = inst.entries[idx];
    if (x[idx]) {
      x[idx] = 0;
      mpz_divexact(in.get_mpz_t(), in.get_mpz_t(), e.get_mpz_t());
      out *= e;
    } else {
      x[idx] = 1;
      in *= e;
      mpz_divexact(out.get_mpz_t(), out.get_mpz_t(), e.get_mpz_t());
    }
    if (in == out) return x;
  }
  return std::nullopt;
}

}  // namespace ppp
