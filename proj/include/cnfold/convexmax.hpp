#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "cnfold/integer.hpp"
#include "cnfold/ip_solver.hpp"
#include "cnfold/matrix.hpp"
#include "cnfold/nfold.hpp"
#include "cnfold/objective.hpp"
#include "cnfold/zonotope.hpp"

namespace cnfold {

/// Linear oracle: max{h x : x in S} as a SolveOutcome.
using LinearOracle = std::function<SolveOutcome(const IntVec&)>;

/// {W e : e in E} without zeros and duplicates, sorted.
inline std::vector<IntVec> project_directions(const std::vector<IntVec>& edges, const ObjectiveWeights& w) {
  std::vector<IntVec> out;
  for (const auto& e : edges) {
    IntVec z = w.project(e);
    if (!is_zero(z)) out.push_back(std::move(z));
  }
  sort_unique(out);
  return out;
}

/// h = W^T g: the n-dimensional objective whose value at x equals g · (W x).
inline IntVec lift_normal(const IntVec& g, const ObjectiveWeights& w) {
  if (g.size() != w.d()) throw DimensionError("lift_normal: direction length differs from d");
  IntVec h = zeros(w.n());
  for (std::size_t i = 0; i < w.d(); ++i) {
    if (g[i].is_zero()) continue;
    for (std::size_t j = 0; j < w.n(); ++j) h[j] += g[i] * w.matrix()(i, j);
  }
  return h;
}

enum class ConvexStatus { Optimal, Infeasible, UnboundedPolyhedron };

inline const char* to_string(ConvexStatus s) {
  switch (s) {
    case ConvexStatus::Optimal: return "optimal";
    case ConvexStatus::Infeasible: return "infeasible";
    case ConvexStatus::UnboundedPolyhedron: return "unbounded";
  }
  return "?";
}

struct ConvexStats {
  std::size_t directions = 0;  // |D| after projection
  std::size_t vertices = 0;    // zonotope vertices enumerated
  std::size_t queries = 0;     // linear-oracle calls, probe included
  std::size_t identity_checks = 0;
  std::size_t identity_failures = 0;
};

struct ConvexOutcome {
  ConvexStatus status = ConvexStatus::Infeasible;
  IntVec x;
  IntVec z;  // W x
  IntVec ray;  // set for UnboundedPolyhedron when the oracle supplied one
  ConvexStats stats;

  bool is_optimal() const noexcept { return status == ConvexStatus::Optimal; }
};

struct ConvexOptions {
  std::size_t threads = 1;
  ZonotopeOptions zonotope;
};

namespace detail {

struct VertexQuery {
  IntVec g;
  IntVec h;
  SolveOutcome result;
};

// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
// exception is rethrown after all workers stop.
inline void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// max{c(W x) : x in S} given a linear oracle for S, a set E containing the
/// edge directions of conv(S), and a comparison oracle for convex c.
/// One oracle query per vertex of zone(W E); the answer is the c-best of
/// the returned points (larger c, then smaller W x, then smaller x).
inline ConvexOutcome convex_maximize(const LinearOracle& oracle, const ObjectiveWeights& w,
                                     const std::vector<IntVec>& edges, const ConvexObjective& c,
                                     const ConvexOptions& opts = {}) {
  ConvexOutcome out;
  SolveOutcome probe = oracle(zeros(w.n()));
  out.stats.queries = 1;
  if (probe.status == Status::Infeasible) return out;
  if (probe.status == Status::Unbounded) {
    out.status = ConvexStatus::UnboundedPolyhedron;
    out.ray = probe.certificate;
    return out;
  }

  const std::vector<IntVec> dirs = project_directions(edges, w);
  out.stats.directions = dirs.size();
  const std::vector<ZonotopeVertex> vertices = zonotope_vertices(dirs, w.d(), opts.zonotope);
  out.stats.vertices = vertices.size();

  std::vector<detail::VertexQuery> queries(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    queries[i].g = vertices[i].certificate;
    queries[i].h = lift_normal(queries[i].g, w);
  }
  detail::parallel_for(queries.size(), opts.threads, [&](std::size_t i) { queries[i].result = oracle(queries[i].h); });
  out.stats.queries += queries.size();

  bool have = false;
  for (auto& q : queries) {
    if (q.result.status == Status::Infeasible) {
      throw InconsistencyError("convex_maximize: oracle reported infeasible after a feasible probe");
    }
    if (q.result.status == Status::Unbounded) {
      out = ConvexOutcome{ConvexStatus::UnboundedPolyhedron, {}, {}, q.result.certificate, out.stats};
      return out;
    }
    IntVec z = w.project(q.result.x);
    ++out.stats.identity_checks;
    if (dot(q.g, z) != dot(q.h, q.result.x)) ++out.stats.identity_failures;
    if (!have || improves(c, z, q.result.x, out.z, out.x)) {
      out.x = std::move(q.result.x);
      out.z = std::move(z);
      have = true;
    }
  }
  if (!have) throw InconsistencyError("convex_maximize: zonotope has no vertices");
  out.status = ConvexStatus::Optimal;
  return out;
}

/// Convex n-fold maximization: the program's own Graver basis supplies the
/// edge directions and its augmentation solver is the linear oracle.
inline ConvexOutcome solve_convex_nfold(const NFoldStencil& st, std::size_t n, const ObjectiveWeights& w,
                                        const NFoldRhs& b, const ConvexObjective& c,
                                        const ConvexOptions& opts = {}, const NFoldOptions& nfold = {}) {
  if (w.n() != n * st.t) throw DimensionError("solve_convex_nfold: weights must have n*t columns");
  IntegerProgram program = make_nfold_program(st, n, b, nfold);
  return convex_maximize([&program](const IntVec& h) { return program.solve(h); }, w,
                         program.graver().elements(), c, opts);
}

/// Same pipeline over a general standard-form program {A x = b, x >= 0}.
inline ConvexOutcome solve_convex_program(const IntegerProgram& program, const ObjectiveWeights& w,
                                          const ConvexObjective& c, const ConvexOptions& opts = {}) {
  if (w.n() != program.matrix().cols()) throw DimensionError("solve_convex_program: weights column mismatch");
  return convex_maximize([&program](const IntVec& h) { return program.solve(h); }, w,
                         program.graver().elements(), c, opts);
}

}  // namespace cnfold
