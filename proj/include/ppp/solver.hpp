#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppp/matrix.hpp"
#include "ppp/pump.hpp"

namespace ppp {

class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigenpair of the Gram matrix S*S'. value is sigma = lambda^2, clamped at
/// zero; residual_norm is the achieved ||G v - sigma v||.
struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual_norm = 0.0;
};

struct SolverConfig {
  double eigen_tol = 1e-9;     // relative zero/accuracy threshold
  int spectrum_k = 4;          // smallest eigenpairs to round
  int zero_cap_log2 = 10;      // cap 2^c on zero-coordinate enumeration
  int kernel_samples = 64;     // random unit vectors in the near-kernel
  double zero_tol = 1e-12;     // |v_i| below this counts as zero
  std::uint64_t seed = 0;
  bool sweep = true;           // cardinality sweep over N in [1, n-1]
  bool pump_enabled = false;
  PumpConfig pump{};
  FactorBudget factor_budget{};
  std::size_t oracle_cap = 24;       // echoed for tooling; solve never enumerates
  double time_budget_seconds = 0.0;  // 0 = unlimited
  int threads = 1;
};

enum class SolveStatus {
  Solved,
  InfeasibleParity,
  NoCandidateVerified,
  BudgetExceeded,
};

const char* to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::NoCandidateVerified;
  std::optional<CandidateSolution> solution;
  std::size_t kernel_dimension = 0;
  std::vector<double> eigen_spectrum_head;
  std::uint64_t candidates_tested = 0;
  std::optional<std::size_t> cardinality_used;
  std::optional<PumpTrace> pump_trace;
  std::vector<std::string> warnings;
  std::string error_detail;
};

/// k smallest eigenpairs of the n x n Gram matrix S*S', ascending. Each pair
/// must meet residual_norm <= tol * (largest eigenvalue + 1).
std::vector<EigenPair> gram_spectrum(const ExponentMatrix& m, std::size_t k,
                                     double tol);

/// Count of eigenvalues <= tol * (largest + 1); equals n - rank(S).
std::size_t kernel_dimension(const ExponentMatrix& m, double tol);

/// Corner candidates of x = 1/2 + beta v over both signs of beta.
/// Coordinates with |v_i| <= zero_tol are enumerated both ways up to
/// 2^cap_log2; excess zero coordinates get the two wholesale settings.
std::vector<BitVec> round_to_corner(const EigenPair& pair,
                                    double zero_tol = 1e-12,
                                    int cap_log2 = 10);

/// The matrix extended with one constant column of weight w encoding
/// 1'x = N. The column target N*w is tracked apart from the half-sum
/// convention of the data columns.
struct AugmentedSystem {
  ExponentMatrix base;
  std::int64_t weight = 1;
  std::size_t target_ones = 0;

  std::size_t rows() const { return base.rows; }
  std::size_t cols() const { return base.cols + 1; }
  /// Length q+1; data columns use the doubled half-sum residual, the last
  /// entry is 2w(1'x - N). All-zero iff x solves with cardinality N.
  std::vector<std::int64_t> residual(const BitVec& x) const;
  Eigen::MatrixXd dense() const;
};

AugmentedSystem cardinality_sweep(const ExponentMatrix& m, std::size_t N);

/// Full pipeline: build, parity filter, optional pumping while q < n,
/// spectral rounding on the unconstrained system and on every cardinality
/// slice, exact verification of each candidate. Never a false positive.
SolveReport solve(const Instance& inst, const SolverConfig& config = {});

/// Exhaustive bipartition search with index 0's side fixed (complement
/// symmetry). Requires n <= cap.
std::optional<BitVec> brute_force_oracle(const Instance& inst,
                                         std::size_t cap = 24);

}  // namespace ppp
