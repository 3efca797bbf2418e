#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include "cnfold/graver.hpp"
#include "cnfold/integer.hpp"
#include "cnfold/matrix.hpp"

namespace cnfold {

/// The fixed (r+s) x t block pair defining an n-fold system: A1 (r x t)
/// couples all layers, A2 (s x t) acts inside each layer.
struct NFoldStencil {
  std::size_t r = 0, s = 0, t = 0;
  IntMat a1, a2;

  NFoldStencil() = default;
  NFoldStencil(IntMat top, IntMat bottom) : t(std::max(top.cols(), bottom.cols())) {
    // An empty block has no rows to carry a width.
    if (top.rows() == 0) top = IntMat(0, t);
    if (bottom.rows() == 0) bottom = IntMat(0, t);
    if (top.cols() != bottom.cols()) throw DimensionError("NFoldStencil: A1 and A2 differ in column count");
    r = top.rows();
    s = bottom.rows();
    a1 = std::move(top);
    a2 = std::move(bottom);
  }

  IntMat stacked() const { return vstack(a1, a2); }

  friend bool operator==(const NFoldStencil&, const NFoldStencil&) = default;
};

/// Right-hand side split as (b0, b1, ..., bn).
struct NFoldRhs {
  IntVec b0;
  std::vector<IntVec> layers;

  IntVec concatenated() const {
    IntVec out = b0;
    for (const auto& l : layers) out.insert(out.end(), l.begin(), l.end());
    return out;
  }

  static NFoldRhs split(const IntVec& b, std::size_t r, std::size_t s, std::size_t n) {
    if (b.size() != r + n * s) {
      throw DimensionError("NFoldRhs::split: expected length " + std::to_string(r + n * s) +
                           ", got " + std::to_string(b.size()));
    }
    NFoldRhs out;
    out.b0.assign(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(r));
    for (std::size_t k = 0; k < n; ++k) {
      auto first = b.begin() + static_cast<std::ptrdiff_t>(r + k * s);
      out.layers.emplace_back(first, first + static_cast<std::ptrdiff_t>(s));
    }
    return out;
  }
};

inline void check_rhs(const NFoldStencil& st, std::size_t n, const NFoldRhs& b) {
  if (b.b0.size() != st.r || b.layers.size() != n) throw DimensionError("NFoldRhs: shape mismatch");
  for (const auto& l : b.layers) {
    if (l.size() != st.s) throw DimensionError("NFoldRhs: layer rhs length mismatch");
  }
}

// Brick helpers: an n*t vector viewed as n layers of length t.

inline std::vector<IntVec> split_bricks(const IntVec& x, std::size_t t) {
  if (t == 0 || x.size() % t != 0) throw DimensionError("split_bricks: length not a multiple of t");
  std::vector<IntVec> bricks;
  for (std::size_t k = 0; k < x.size() / t; ++k) {
    auto first = x.begin() + static_cast<std::ptrdiff_t>(k * t);
    bricks.emplace_back(first, first + static_cast<std::ptrdiff_t>(t));
  }
  return bricks;
}

inline IntVec join_bricks(const std::vector<IntVec>& bricks) {
  IntVec out;
  for (const auto& b : bricks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

/// Number of nonzero bricks.
inline std::size_t brick_type(const IntVec& x, std::size_t t) {
  std::size_t k = 0;
  for (const auto& b : split_bricks(x, t)) k += is_zero(b) ? 0 : 1;
  return k;
}

/// (1_n ⊗ A1) over (I_n ⊗ A2): the (r + n s) x (n t) n-fold matrix.
inline IntMat nfold_matrix(const NFoldStencil& st, std::size_t n) {
  if (n < 1) throw DimensionError("nfold_matrix: n must be at least 1");
  IntMat m(st.r + n * st.s, n * st.t);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < st.r; ++i)
      for (std::size_t j = 0; j < st.t; ++j) m(i, k * st.t + j) = st.a1(i, j);
    for (std::size_t i = 0; i < st.s; ++i)
      for (std::size_t j = 0; j < st.t; ++j) m(st.r + k * st.s + i, k * st.t + j) = st.a2(i, j);
  }
  return m;
}

/// n-product: the n-fold matrix of I_t stacked over A.
inline IntMat nproduct(const IntMat& a, std::size_t n) {
  return nfold_matrix(NFoldStencil(IntMat::identity(a.cols()), a), n);
}

struct NFoldOptions {
  GraverOptions graver;
  std::size_t max_lifted = 20'000'000;  // cap on placements enumerated while lifting
  bool force_lift = false;              // lift even when n <= complexity
};

/// Stabilization bound: max 1-norm over the Graver basis of the matrix whose
/// columns are A1·h for every h in G(A2). Defined as 1 when either inner
/// basis is empty.
inline std::size_t graver_complexity(const NFoldStencil& st, const GraverOptions& opts = {}) {
  GraverBasis inner = graver_basis(st.a2, opts);
  if (inner.empty()) return 1;
  IntMat b(st.r, inner.size());
  for (std::size_t c = 0; c < inner.size(); ++c) {
    IntVec col = mat_vec(st.a1, inner.elements()[c]);
    for (std::size_t i = 0; i < st.r; ++i) b(i, c) = col[i];
  }
  GraverBasis outer = graver_basis(b, opts);
  Integer best = 1;
  for (const auto& g : outer.elements()) best = std::max(best, norm1(g));
  return best.convert_to<std::size_t>();
}

namespace detail {

// Every way to place the nonzero bricks of `bricks` (kept in order) into n
// layers; emits into out. Order-preserving placement suffices because the
// source basis is closed under layer permutations.
inline void place_bricks(const std::vector<IntVec>& nonzero, std::size_t n, std::size_t t,
                         std::vector<IntVec>& out, std::size_t cap) {
  const std::size_t tau = nonzero.size();
  if (tau > n) return;
  std::vector<std::size_t> pos(tau);
  for (std::size_t i = 0; i < tau; ++i) pos[i] = i;
  while (true) {
    if (out.size() >= cap) throw GuardExceeded("nfold_graver: lifted placement count exceeds cap");
    IntVec v = zeros(n * t);
    for (std::size_t i = 0; i < tau; ++i)
      for (std::size_t j = 0; j < t; ++j) v[pos[i] * t + j] = nonzero[i][j];
    out.push_back(std::move(v));
    // next combination
    std::size_t i = tau;
    while (i > 0 && pos[i - 1] == n - tau + i - 1) --i;
    if (i == 0) break;
    ++pos[i - 1];
    for (std::size_t k = i; k < tau; ++k) pos[k] = pos[k - 1] + 1;
  }
}

}  // namespace detail

/// Lift a basis of the g-fold matrix to the n-fold matrix by placing the
/// nonzero bricks of every element into n layers.
inline std::vector<IntVec> lift_graver(const GraverBasis& base, std::size_t t, std::size_t n,
                                       std::size_t cap) {
  std::vector<IntVec> out;
  for (const auto& e : base.elements()) {
    std::vector<IntVec> nonzero;
    for (auto& b : split_bricks(e, t)) {
      if (!is_zero(b)) nonzero.push_back(std::move(b));
    }
    detail::place_bricks(nonzero, n, t, out, cap);
  }
  sort_unique(out);
  return out;
}

/// Graver basis of the n-fold matrix. Up to the Graver complexity g the
/// basis is computed directly; beyond it (or when forced) it is lifted from
/// the basis of the g-fold matrix.
inline GraverBasis nfold_graver(const NFoldStencil& st, std::size_t n, const NFoldOptions& opts = {}) {
  if (n < 1) throw DimensionError("nfold_graver: n must be at least 1");
  const IntMat full = nfold_matrix(st, n);
  const std::size_t g = graver_complexity(st, opts.graver);
  if (n <= g && !opts.force_lift) return graver_basis(full, opts.graver);
  GraverBasis base = graver_basis(nfold_matrix(st, g), opts.graver);
  auto lifted = lift_graver(base, st.t, n, opts.max_lifted);
  if (lifted.size() > opts.graver.max_elements) {
    throw GuardExceeded("nfold_graver: basis cardinality exceeds cap");
  }
  return GraverBasis(full, std::move(lifted));
}

// Stencil file: "r s t" header, then the A1 block and the A2 block, each in
// the matrix text format.

inline NFoldStencil read_stencil(std::istream& is) {
  std::size_t r = detail::read_count(is, "r");
  std::size_t s = detail::read_count(is, "s");
  std::size_t t = detail::read_count(is, "t");
  IntMat a1 = read_matrix(is);
  IntMat a2 = read_matrix(is);
  if (a1.rows() != r || a1.cols() != t || a2.rows() != s || a2.cols() != t) {
    throw ParseError("stencil: block shapes disagree with the 'r s t' header");
  }
  return NFoldStencil(std::move(a1), std::move(a2));
}

inline void write_stencil(std::ostream& os, const NFoldStencil& st) {
  os << st.r << ' ' << st.s << ' ' << st.t << '\n';
  write_matrix(os, st.a1);
  write_matrix(os, st.a2);
}

}  // namespace cnfold
