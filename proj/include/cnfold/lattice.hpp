#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cnfold/integer.hpp"
#include "cnfold/matrix.hpp"

namespace cnfold {

/// Column-style integer echelon form: A·U = H with U unimodular and H in
/// lower echelon shape (pivot of row-block k sits in column k). The last
/// n - rank columns of U span the integer kernel of A.
class ColumnEchelon {
 public:
  explicit ColumnEchelon(const IntMat& a) : m_(a.rows()), n_(a.cols()) {
    // Work column-wise: cols_[j] holds column j of H stacked over column j of U.
    cols_.assign(n_, zeros(m_ + n_));
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t i = 0; i < m_; ++i) cols_[j][i] = a(i, j);
      cols_[j][m_ + j] = 1;
    }
    std::size_t piv = 0;
    for (std::size_t i = 0; i < m_ && piv < n_; ++i) {
      // Euclid across columns piv..n-1 on row i.
      while (true) {
        std::size_t best = n_;
        for (std::size_t j = piv; j < n_; ++j) {
          if (cols_[j][i].is_zero()) continue;
          if (best == n_ || abs(cols_[j][i]) < abs(cols_[best][i])) best = j;
        }
        if (best == n_) break;
        std::swap(cols_[piv], cols_[best]);
        bool done = true;
        for (std::size_t j = piv + 1; j < n_; ++j) {
          if (cols_[j][i].is_zero()) continue;
          Integer q = floor_div(cols_[j][i], cols_[piv][i]);
          axpy(cols_[j], -q, cols_[piv]);
          if (!cols_[j][i].is_zero()) done = false;
        }
        if (done) break;
      }
      if (!cols_[piv][i].is_zero()) {
        if (cols_[piv][i].sign() < 0) cols_[piv] = -cols_[piv];
        pivot_rows_.push_back(i);
        ++piv;
      }
    }
    rank_ = piv;
  }

  std::size_t rank() const noexcept { return rank_; }

  /// Lattice basis of {x in Z^n : A x = 0}, size-reduced.
  std::vector<IntVec> kernel_basis() const {
    std::vector<IntVec> basis;
    for (std::size_t j = rank_; j < n_; ++j) {
      basis.emplace_back(cols_[j].begin() + static_cast<std::ptrdiff_t>(m_), cols_[j].end());
    }
    size_reduce(basis);
    return basis;
  }

  /// Some integer x with A x = b, or nullopt when none exists.
  std::optional<IntVec> solve(const IntVec& b) const {
    if (b.size() != m_) throw DimensionError("ColumnEchelon::solve: rhs length mismatch");
    IntVec y = zeros(n_);
    IntVec residual = b;
    for (std::size_t k = 0; k < rank_; ++k) {
      std::size_t i = pivot_rows_[k];
      // Rows between pivots are determined by earlier y's; check them.
      std::size_t lo = (k == 0) ? 0 : pivot_rows_[k - 1] + 1;
      for (std::size_t r = lo; r < i; ++r) {
        if (!residual[r].is_zero()) return std::nullopt;
      }
      const Integer& p = cols_[k][i];
      if (residual[i] % p != 0) return std::nullopt;
      y[k] = residual[i] / p;
      for (std::size_t r = i; r < m_; ++r) residual[r] -= y[k] * cols_[k][r];
    }
    for (const auto& r : residual) {
      if (!r.is_zero()) return std::nullopt;
    }
    IntVec x = zeros(n_);
    for (std::size_t k = 0; k < rank_; ++k) {
      for (std::size_t j = 0; j < n_; ++j) x[j] += y[k] * cols_[k][m_ + j];
    }
    return x;
  }

  /// Pairwise Lagrange-style reduction; keeps the lattice, shrinks entries.
  static void size_reduce(std::vector<IntVec>& basis) {
    bool changed = true;
    for (int round = 0; changed && round < 64; ++round) {
      changed = false;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
          if (i == j) continue;
          Integer nj = dot(basis[j], basis[j]);
          if (nj.is_zero()) continue;
          Integer q = round_div(dot(basis[i], basis[j]), nj);
          if (q.is_zero()) continue;
          IntVec cand = basis[i];
          axpy(cand, -q, basis[j]);
          if (dot(cand, cand) < dot(basis[i], basis[i])) {
            basis[i] = std::move(cand);
            changed = true;
          }
        }
      }
    }
    for (auto& v : basis) v = sign_normalized(v);
  }

 private:
  std::size_t m_, n_;
  std::size_t rank_ = 0;
  std::vector<std::size_t> pivot_rows_;
  std::vector<IntVec> cols_;
};

inline std::vector<IntVec> lattice_kernel_basis(const IntMat& a) {
  return ColumnEchelon(a).kernel_basis();
}

inline std::size_t rank(const IntMat& a) { return ColumnEchelon(a).rank(); }

inline std::size_t rank(const std::vector<IntVec>& rows, std::size_t cols) {
  return rank(IntMat::from_rows(rows, cols));
}

}  // namespace cnfold
