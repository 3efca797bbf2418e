#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cnfold/graver.hpp"
#include "cnfold/integer.hpp"
#include "cnfold/lattice.hpp"
#include "cnfold/matrix.hpp"
#include "cnfold/nfold.hpp"

namespace cnfold {

enum class Status { Optimal, Infeasible, Unbounded };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

/// Result of max{w x : A x = b, x >= 0 integer}. For Unbounded the ray
/// certificate g (g >= 0, A g = 0, w g > 0) is kept.
struct SolveOutcome {
  Status status = Status::Infeasible;
  IntVec x;
  Integer value = 0;
  IntVec certificate;

  static SolveOutcome optimal(IntVec x, Integer value) {
    return {Status::Optimal, std::move(x), std::move(value), {}};
  }
  static SolveOutcome infeasible() { return {}; }
  static SolveOutcome unbounded(IntVec ray) { return {Status::Unbounded, {}, 0, std::move(ray)}; }

  bool is_optimal() const noexcept { return status == Status::Optimal; }
};

/// Called after every augmentation step with the new iterate and objective.
using StepObserver = std::function<void(const IntVec& x, const Integer& value)>;

/// Graver elements in sparse form; augmentation scans these.
class MoveSet {
 public:
  struct Move {
    std::vector<std::uint32_t> idx;
    IntVec val;
    bool nonnegative = true;
  };

  explicit MoveSet(const GraverBasis& g) : dim_(g.dimension()) {
    moves_.reserve(g.size());
    for (const auto& e : g.elements()) {
      Move m;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i].is_zero()) continue;
        m.idx.push_back(static_cast<std::uint32_t>(i));
        m.val.push_back(e[i]);
        if (e[i].sign() < 0) m.nonnegative = false;
      }
      moves_.push_back(std::move(m));
    }
  }

  std::size_t dimension() const noexcept { return dim_; }
  const std::vector<Move>& moves() const noexcept { return moves_; }

  IntVec dense(const Move& m) const {
    IntVec v = zeros(dim_);
    for (std::size_t k = 0; k < m.idx.size(); ++k) v[m.idx[k]] = m.val[k];
    return v;
  }

 private:
  std::size_t dim_;
  std::vector<Move> moves_;
};

namespace detail {

inline Integer sparse_dot(const MoveSet::Move& m, const IntVec& w) {
  Integer s = 0;
  for (std::size_t k = 0; k < m.idx.size(); ++k) {
    const Integer& wi = w[m.idx[k]];
    if (!wi.is_zero()) s += wi * m.val[k];
  }
  return s;
}

inline void apply(IntVec& x, const MoveSet::Move& m, const Integer& step) {
  for (std::size_t k = 0; k < m.idx.size(); ++k) x[m.idx[k]] += step * m.val[k];
}

inline Integer negative_part(const Integer& y) { return y.sign() < 0 ? Integer(-y) : Integer(0); }

}  // namespace detail

/// Greedy Graver-best augmentation of a feasible point. Each step takes the
/// element and maximal feasible step length maximizing step * (w g); ties go
/// to the earlier element in canonical order.
inline SolveOutcome augment_to_optimum(IntVec x, const MoveSet& moves, const IntVec& w,
                                       const StepObserver& observer = {}) {
  if (x.size() != moves.dimension() || w.size() != moves.dimension()) {
    throw DimensionError("augment_to_optimum: dimension mismatch");
  }
  if (!is_nonnegative(x)) throw DimensionError("augment_to_optimum: start point is not nonnegative");
  Integer value = dot(w, x);
  if (is_zero(w)) return SolveOutcome::optimal(std::move(x), value);

  // w g is fixed for the whole run; only moves with w g > 0 matter. Step caps
  // depend on x and are refreshed for moves touching coordinates that changed.
  const auto& all = moves.moves();
  std::vector<std::size_t> active;
  std::vector<Integer> wg;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Integer v = detail::sparse_dot(all[i], w);
    if (v.sign() <= 0) continue;
    if (all[i].nonnegative) return SolveOutcome::unbounded(moves.dense(all[i]));
    active.push_back(i);
    wg.push_back(std::move(v));
  }
  std::vector<std::vector<std::size_t>> touching(moves.dimension());
  for (std::size_t a = 0; a < active.size(); ++a) {
    const auto& m = all[active[a]];
    for (std::size_t k = 0; k < m.idx.size(); ++k) {
      if (m.val[k].sign() < 0) touching[m.idx[k]].push_back(a);
    }
  }
  std::vector<Integer> gain(active.size());
  auto refresh = [&](std::size_t a) {
    const auto& m = all[active[a]];
    Integer step = -1;
    for (std::size_t k = 0; k < m.idx.size(); ++k) {
      if (m.val[k].sign() >= 0) continue;
      Integer cap = x[m.idx[k]] / -m.val[k];
      if (step < 0 || cap < step) step = cap;
    }
    gain[a] = step < 1 ? Integer(0) : Integer(step * wg[a]);
  };
  for (std::size_t a = 0; a < active.size(); ++a) refresh(a);

  while (true) {
    std::size_t best = active.size();
    for (std::size_t a = 0; a < active.size(); ++a) {
      if (gain[a].sign() > 0 && (best == active.size() || gain[a] > gain[best])) best = a;
    }
    if (best == active.size()) break;
    const MoveSet::Move& m = all[active[best]];
    Integer best_gain = gain[best];
    Integer best_step = best_gain / wg[best];
    detail::apply(x, m, best_step);
    for (auto i : m.idx) {
      if (x[i].sign() < 0) throw InconsistencyError("augment_to_optimum: step left the nonnegative orthant");
    }
    for (auto i : m.idx) {
      for (auto a : touching[i]) refresh(a);
    }
    value += best_gain;
    if (observer) observer(x, value);
  }
  return SolveOutcome::optimal(std::move(x), std::move(value));
}

inline SolveOutcome augment_to_optimum(IntVec x0, const GraverBasis& g, const IntVec& w,
                                       const StepObserver& observer = {}) {
  return augment_to_optimum(std::move(x0), MoveSet(g), w, observer);
}

/// Drive an integer solution of A x = b toward x >= 0 by minimizing the total
/// negative part over {A x = b, x >= min(0, x0)} with Graver-best steps.
/// Returns the final iterate; it is feasible iff its negative part is zero.
inline IntVec reduce_negative_part(IntVec x, const MoveSet& moves, const StepObserver& observer = {}) {
  IntVec lower(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) lower[i] = x[i].sign() < 0 ? x[i] : Integer(0);
  Integer total = 0;
  for (const auto& xi : x) total += detail::negative_part(xi);

  auto delta = [&](const MoveSet::Move& m, const Integer& step) {
    Integer d = 0;
    for (std::size_t k = 0; k < m.idx.size(); ++k) {
      const Integer& xi = x[m.idx[k]];
      d += detail::negative_part(xi + step * m.val[k]) - detail::negative_part(xi);
    }
    return d;
  };

  while (total.sign() > 0) {
    const MoveSet::Move* best = nullptr;
    Integer best_delta = 0, best_step = 0;
    for (const auto& m : moves.moves()) {
      // Only moves raising some negative coordinate can help.
      bool useful = false;
      for (std::size_t k = 0; k < m.idx.size() && !useful; ++k) {
        useful = x[m.idx[k]].sign() < 0 && m.val[k].sign() > 0;
      }
      if (!useful) continue;
      std::optional<Integer> cap;
      for (std::size_t k = 0; k < m.idx.size(); ++k) {
        if (m.val[k].sign() >= 0) continue;
        Integer c = (x[m.idx[k]] - lower[m.idx[k]]) / -m.val[k];
        if (!cap || c < *cap) cap = c;
      }
      if (cap && *cap < 1) continue;
      // f along the line is convex piecewise linear; test its breakpoints.
      std::vector<Integer> candidates{Integer(1)};
      if (cap) candidates.push_back(*cap);
      for (std::size_t k = 0; k < m.idx.size(); ++k) {
        const Integer& xi = x[m.idx[k]];
        candidates.push_back(floor_div(-xi, m.val[k]));
        candidates.push_back(ceil_div(-xi, m.val[k]));
      }
      for (const auto& c : candidates) {
        if (c < 1 || (cap && c > *cap)) continue;
        Integer d = delta(m, c);
        if (d < best_delta) {
          best_delta = std::move(d);
          best_step = c;
          best = &m;
        }
      }
    }
    if (!best) break;
    detail::apply(x, *best, best_step);
    total += best_delta;
    if (observer) observer(x, total);
  }
  return x;
}

/// Integer solution of the n-fold system assembled layer by layer: each layer
/// gets a particular solution of A2 y = b^k, then one shared correction in
/// ker(A2) fixes the linking rows A1 * sum_k x^k = b^0.
inline std::optional<IntVec> nfold_particular_solution(const NFoldStencil& st, std::size_t n,
                                                       const NFoldRhs& b) {
  check_rhs(st, n, b);
  ColumnEchelon inner(st.a2);
  std::vector<IntVec> bricks;
  IntVec linked = zeros(st.r);
  for (std::size_t k = 0; k < n; ++k) {
    auto y = inner.solve(b.layers[k]);
    if (!y) return std::nullopt;
    linked = linked + mat_vec(st.a1, *y);
    bricks.push_back(std::move(*y));
  }
  auto kernel = inner.kernel_basis();
  IntMat couple(st.r, kernel.size());
  for (std::size_t c = 0; c < kernel.size(); ++c) {
    IntVec col = mat_vec(st.a1, kernel[c]);
    for (std::size_t i = 0; i < st.r; ++i) couple(i, c) = col[i];
  }
  auto coeffs = ColumnEchelon(couple).solve(b.b0 - linked);
  if (!coeffs) return std::nullopt;
  for (std::size_t c = 0; c < kernel.size(); ++c) axpy(bricks[0], (*coeffs)[c], kernel[c]);
  return join_bricks(bricks);
}

/// A linear integer program {A x = b, x >= 0} with its Graver basis and a
/// phase-one point, ready to answer max{w x} queries. Queries are const and
/// safe to run concurrently.
class IntegerProgram {
 public:
  IntegerProgram(IntMat a, IntVec b, GraverBasis graver, std::optional<IntVec> particular)
      : a_(std::move(a)), b_(std::move(b)), graver_(std::move(graver)), moves_(graver_) {
    if (b_.size() != a_.rows()) throw DimensionError("IntegerProgram: rhs length mismatch");
    if (particular) {
      if (mat_vec(a_, *particular) != b_) {
        throw InconsistencyError("IntegerProgram: particular solution does not satisfy A x = b");
      }
      IntVec x = reduce_negative_part(std::move(*particular), moves_);
      if (is_nonnegative(x)) start_ = std::move(x);
    }
  }

  const IntMat& matrix() const noexcept { return a_; }
  const IntVec& rhs() const noexcept { return b_; }
  const GraverBasis& graver() const noexcept { return graver_; }
  const MoveSet& moves() const noexcept { return moves_; }
  bool feasible() const noexcept { return start_.has_value(); }
  const std::optional<IntVec>& start() const noexcept { return start_; }

  SolveOutcome solve(const IntVec& w, const StepObserver& observer = {}) const {
    if (w.size() != a_.cols()) throw DimensionError("IntegerProgram::solve: objective length mismatch");
    if (!start_) return SolveOutcome::infeasible();
    return augment_to_optimum(*start_, moves_, w, observer);
  }

 private:
  IntMat a_;
  IntVec b_;
  GraverBasis graver_;
  MoveSet moves_;
  std::optional<IntVec> start_;
};

/// Generic path: direct Graver basis of A. No polynomiality claim.
inline IntegerProgram make_program(const IntMat& a, const IntVec& b, const GraverOptions& opts = {}) {
  auto particular = ColumnEchelon(a).solve(b);
  GraverBasis g = particular ? graver_basis(a, opts) : GraverBasis(a, {});
  return IntegerProgram(a, b, std::move(g), std::move(particular));
}

inline IntegerProgram make_nfold_program(const NFoldStencil& st, std::size_t n, const NFoldRhs& b,
                                         const NFoldOptions& opts = {}) {
  auto particular = nfold_particular_solution(st, n, b);
  IntMat a = nfold_matrix(st, n);
  GraverBasis g = particular ? nfold_graver(st, n, opts) : GraverBasis(a, {});
  return IntegerProgram(std::move(a), b.concatenated(), std::move(g), std::move(particular));
}

/// As above with a precomputed basis of the n-fold matrix, for callers that
/// solve many right-hand sides over one (stencil, n).
inline IntegerProgram make_nfold_program(const NFoldStencil& st, std::size_t n, const NFoldRhs& b,
                                         const GraverBasis& basis) {
  IntMat a = nfold_matrix(st, n);
  if (!(basis.source() == a)) throw DimensionError("make_nfold_program: basis belongs to another matrix");
  return IntegerProgram(std::move(a), b.concatenated(), basis, nfold_particular_solution(st, n, b));
}

/// Phase one only: any feasible point (value 0) or Infeasible.
inline SolveOutcome find_feasible(const NFoldStencil& st, std::size_t n, const NFoldRhs& b,
                                  const NFoldOptions& opts = {}) {
  auto program = make_nfold_program(st, n, b, opts);
  if (!program.feasible()) return SolveOutcome::infeasible();
  return SolveOutcome::optimal(*program.start(), 0);
}

inline SolveOutcome solve_nfold_ip(const NFoldStencil& st, std::size_t n, const IntVec& w,
                                   const NFoldRhs& b, const NFoldOptions& opts = {}) {
  return make_nfold_program(st, n, b, opts).solve(w);
}

}  // namespace cnfold
