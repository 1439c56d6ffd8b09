#include "ppp/matrix.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "ppp/util.hpp"

namespace ppp {

std::uint64_t Instance::bit_bound() const {
  std::uint64_t m = 0;
  for (const BigInt& e : entries) m = std::max(m, bit_length(e) - 1);
  return m;
}

Instance Instance::from_entries(std::vector<BigInt> es) {
  if (es.empty()) throw std::invalid_argument("instance: needs at least one entry");
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (es[i] < 1) {
      throw std::invalid_argument("instance: entry " + std::to_string(i) +
                                  " must be >= 1");
    }
  }
  return Instance{std::move(es)};
}

std::int64_t ExponentMatrix::column_sum(std::size_t k) const {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < rows; ++i) s += at(i, k);
  return s;
}

BigInt ExponentMatrix::row_product(std::size_t i) const {
  BigInt v = 1, pw;
  for (std::size_t k = 0; k < cols; ++k) {
    std::int64_t e = at(i, k);
    if (e == 0) continue;
    mpz_pow_ui(pw.get_mpz_t(), primes[k].get_mpz_t(),
               static_cast<unsigned long>(e));
    v *= pw;
  }
  return v;
}

std::vector<std::size_t> ExponentMatrix::unit_rows() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows; ++i) {
    if (entries[i] == 1) out.push_back(i);
  }
  return out;
}

std::int64_t ExponentMatrix::max_exponent() const {
  std::int64_t m = 0;
  for (std::int64_t e : exps) m = std::max(m, e);
  return m;
}

std::uint64_t ExponentMatrix::max_prime_bits() const {
  std::uint64_t m = 0;
  for (const BigInt& p : primes) m = std::max(m, bit_length(p));
  return m;
}

std::uint64_t ExponentMatrix::total_big_omega() const {
  std::uint64_t s = 0;
  for (std::int64_t e : exps) s += static_cast<std::uint64_t>(e);
  return s;
}

ExponentMatrix assemble_matrix(std::vector<PrimeFactorization> row_factors) {
  ExponentMatrix m;
  m.rows = row_factors.size();
  std::map<BigInt, std::size_t> col_of;
  for (const auto& f : row_factors) {
    for (const auto& [p, e] : f.factors) col_of.emplace(p, 0);
  }
  m.cols = col_of.size();
  m.primes.reserve(m.cols);
  std::size_t k = 0;
  for (auto& [p, idx] : col_of) {
    idx = k++;
    m.primes.push_back(p);
  }
  m.exps.assign(m.rows * m.cols, 0);
  m.entries.resize(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (const auto& [p, e] : row_factors[i].factors) {
      m.exps[i * m.cols + col_of[p]] = static_cast<std::int64_t>(e);
    }
    m.entries[i] = row_factors[i].value();
  }
  return m;
}

ExponentMatrix build_matrix(const Instance& inst, const FactorBudget& budget,
                            int threads) {
  std::vector<PrimeFactorization> fs(inst.size());
  parallel_for(inst.size(), threads, [&](std::size_t i) {
    try {
      fs[i] = factorize(inst.entries[i], budget);
    } catch (const BudgetExceeded& e) {
      throw BudgetExceeded(std::string(e.what()) + " (entry index " +
                           std::to_string(i) + ")");
    }
  });
  return assemble_matrix(std::move(fs));
}

std::vector<std::int64_t> residual(const ExponentMatrix& m, const BitVec& x) {
  if (x.size() != m.rows) {
    throw std::invalid_argument("residual: selection length != row count");
  }
  std::vector<std::int64_t> r(m.cols, 0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    std::int64_t w = x[i] ? 1 : -1;  // 2*x_i - 1
    for (std::size_t k = 0; k < m.cols; ++k) r[k] += w * m.at(i, k);
  }
  return r;
}

std::vector<double> column_targets(const ExponentMatrix& m) {
  std::vector<double> t(m.cols);
  for (std::size_t k = 0; k < m.cols; ++k) {
    t[k] = 0.5 * static_cast<double>(m.column_sum(k));
  }
  return t;
}

bool parity_feasible(const ExponentMatrix& m) {
  for (std::size_t k = 0; k < m.cols; ++k) {
    if (m.column_sum(k) % 2 != 0) return false;
  }
  return true;
}

bool verify_exact(const Instance& inst, const BitVec& x) {
  if (x.size() != inst.size()) {
    throw std::invalid_argument("verify_exact: selection length != instance size");
  }
  BigInt in = 1, out = 1;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    (x[i] ? in : out) *= inst.entries[i];
  }
  return in == out;
}

std::size_t rank_exact(const ExponentMatrix& m) {
  if (m.rows == 0 || m.cols == 0) return 0;
  // Bareiss fraction-free elimination
  std::vector<BigInt> a(m.exps.begin(), m.exps.end());
  auto at = [&](std::size_t i, std::size_t j) -> BigInt& {
    return a[i * m.cols + j];
  };
  BigInt prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t piv = r;
    while (piv < m.rows && at(piv, c) == 0) ++piv;
    if (piv == m.rows) continue;
    if (piv != r) {
      for (std::size_t j = c; j < m.cols; ++j) std::swap(at(piv, j), at(r, j));
    }
    for (std::size_t i = r + 1; i < m.rows; ++i) {
      for (std::size_t j = c + 1; j < m.cols; ++j) {
        BigInt num = at(r, c) * at(i, j) - at(i, c) * at(r, j);
        mpz_divexact(at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, c) = 0;
    }
    prev = at(r, c);
    ++r;
  }
  return r;
}

CandidateSolution make_candidate(const Instance& inst, const ExponentMatrix& m,
                                 const BitVec& x) {
  CandidateSolution c;
  c.x = x;
  c.residual = residual(m, x);
  c.exact = verify_exact(inst, x);
  c.cardinality = static_cast<std::size_t>(
      std::count(x.begin(), x.end(), std::uint8_t{1}));
  return c;
}

}  // namespace ppp
