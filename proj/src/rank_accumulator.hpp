#pragma once

// Incremental exact rank: keeps a fraction-free echelon basis of the vectors
// added so far, reducing each new vector against it in insertion order.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <vector>

#include "fliplab/algebra.hpp"

namespace fliplab::detail {

class RankAccumulator {
 public:
  explicit RankAccumulator(const std::vector<NodeId>& universe) {
    for (std::size_t x = 0; x < universe.size(); ++x) {
      for (std::size_t y = x + 1; y < universe.size(); ++y) col_.emplace(EdgeKey{universe[x], universe[y]}, col_.size());
    }
  }

  /// True when v is independent of the vectors added before.
  bool add(const EdgeVector& v) {
    if (v.is_zero() || rows_.size() == col_.size()) return false;
    std::vector<mpz_class> row(col_.size());
    for (const auto& [e, x] : v.entries()) {
      auto it = col_.find(e);
      if (it == col_.end()) throw InvalidArgument("vector entry outside the accumulator's edge set");
      row[it->second] = static_cast<long>(x);
    }
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::size_t p = pivots_[k];
      if (sgn(row[p]) == 0) continue;
      const mpz_class f = row[p];
      const mpz_class& piv = rows_[k][p];
      for (std::size_t j = 0; j < row.size(); ++j) row[j] = piv * row[j] - f * rows_[k][j];
      normalize(row);
    }
    auto nz = std::find_if(row.begin(), row.end(), [](const mpz_class& x) { return sgn(x) != 0; });
    if (nz == row.end()) return false;
    pivots_.push_back(static_cast<std::size_t>(nz - row.begin()));
    rows_.push_back(std::move(row));
    return true;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  static void normalize(std::vector<mpz_class>& row) {
    mpz_class g = 0;
    for (const auto& x : row) {
      if (sgn(x) != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    }
    if (g > 1) {
      for (auto& x : row) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    }
  }

  std::map<EdgeKey, std::size_t> col_;
  std::vector<std::vector<mpz_class>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace fliplab::detail
