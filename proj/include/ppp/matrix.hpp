#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppp/numtheory.hpp"

namespace ppp {

/// 0/1 selection vector over instance indices.
using BitVec = std::vector<std::uint8_t>;

/// An ordered multiset of positive integers. bit_bound() is the largest
/// floor(log2 s_i), so every entry is < 2^(bit_bound+1) and exponents in the
/// factor matrix never exceed it.
struct Instance {
  std::vector<BigInt> entries;

  std::size_t size() const { return entries.size(); }
  std::uint64_t bit_bound() const;

  static Instance from_entries(std::vector<BigInt> es);
};

/// Prime-exponent matrix: rows follow the instance order, columns are headed
/// by the ascending list of all primes dividing some entry. Rows of entries
/// equal to 1 are all zero and kept (they change n, never feasibility).
struct ExponentMatrix {
  std::vector<BigInt> primes;       // ascending, no dead columns
  std::vector<std::int64_t> exps;   // row-major, rows x cols
  std::vector<BigInt> entries;      // the originating (pseudo-)instance
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::int64_t at(std::size_t i, std::size_t k) const {
    return exps[i * cols + k];
  }
  std::int64_t column_sum(std::size_t k) const;
  BigInt row_product(std::size_t i) const;
  std::vector<std::size_t> unit_rows() const;
  std::int64_t max_exponent() const;  // 0 for an all-unit instance
  std::uint64_t max_prime_bits() const;
  std::uint64_t total_big_omega() const;  // sum of all exponents
};

/// Factors every entry and assembles the matrix. Budget overruns are
/// rethrown as BudgetExceeded with the offending entry index in the message.
ExponentMatrix build_matrix(const Instance& inst, const FactorBudget& budget = {},
                            int threads = 1);

/// Assembly from already-known row factorizations (pump path).
ExponentMatrix assemble_matrix(std::vector<PrimeFactorization> row_factors);

/// Doubled residual 2*x'*S - 1'*S per column; zero vector iff x solves the
/// product partition restricted to this matrix.
std::vector<std::int64_t> residual(const ExponentMatrix& m, const BitVec& x);

/// Subset-sum targets T_k = (column sum)/2. Half-integers are exact in
/// double at this scale.
std::vector<double> column_targets(const ExponentMatrix& m);

/// False certifies infeasibility: some prime has odd total exponent.
bool parity_feasible(const ExponentMatrix& m);

/// Exact product comparison of the two sides selected by x.
bool verify_exact(const Instance& inst, const BitVec& x);

/// Rank over the rationals via fraction-free elimination on exact integers.
std::size_t rank_exact(const ExponentMatrix& m);

struct CandidateSolution {
  BitVec x;
  std::vector<std::int64_t> residual;
  bool exact = false;
  std::size_t cardinality = 0;
};

CandidateSolution make_candidate(const Instance& inst, const ExponentMatrix& m,
                                 const BitVec& x);

}  // namespace ppp
