#pragma once

#include <map>
#include <set>
#include <vector>

#include "cnfold/integer.hpp"
#include "cnfold/lattice.hpp"
#include "cnfold/matrix.hpp"

namespace cnfold {

/// A vertex of zone(D) = conv{sum_e ±e}, with the sign pattern producing it
/// and an integer direction maximized over the zonotope only at the vertex.
struct ZonotopeVertex {
  IntVec vertex;
  IntVec certificate;
  std::vector<int> signs;  // one entry per generator, in input order
};

struct ZonotopeOptions {
  std::size_t max_dim = 6;
};

namespace detail {

/// Chambers of a central hyperplane arrangement, one integer interior point
/// each. A chamber of rank >= 2 touches at least one ray of the arrangement
/// (a rank-(rho-1) flat); near that ray its signs agree with the ray off the
/// hyperplanes through it, and with a chamber of the localized arrangement on
/// them. So every chamber shows up as big * ray + local witness, where `big`
/// exceeds every |local · e| off the ray's hyperplanes.
class ChamberFinder {
 public:
  explicit ChamberFinder(std::size_t dim) : dim_(dim) {}

  // normals: distinct, primitive, sign-normalized, nonzero.
  const std::vector<IntVec>& witnesses(const std::vector<IntVec>& normals) {
    auto it = memo_.find(normals);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(normals, compute(normals)).first->second;
  }

 private:
  std::vector<IntVec> compute(const std::vector<IntVec>& normals) {
    if (normals.empty()) return {zeros(dim_)};
    std::vector<IntVec> basis;
    for (const auto& e : normals) {
      basis.push_back(e);
      if (rank(basis, dim_) < basis.size()) basis.pop_back();
    }
    const std::size_t rho = basis.size();
    if (rho == 1) return {normals.front(), -normals.front()};

    std::set<IntVec, LexLess> rays;
    std::vector<std::size_t> pick(rho - 1);
    for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
    const std::size_t m = normals.size();
    while (true) {
      // Ray = rowspace ∩ picked hyperplanes, when that is a line.
      IntMat coupling(rho - 1, rho);
      for (std::size_t a = 0; a < rho - 1; ++a)
        for (std::size_t b = 0; b < rho; ++b) coupling(a, b) = dot(normals[pick[a]], basis[b]);
      auto kernel = lattice_kernel_basis(coupling);
      if (kernel.size() == 1) {
        IntVec ray = zeros(dim_);
        for (std::size_t b = 0; b < rho; ++b) axpy(ray, kernel[0][b], basis[b]);
        rays.insert(sign_normalized(primitive(ray)));
      }
      std::size_t i = pick.size();
      while (i > 0 && pick[i - 1] == m - pick.size() + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t k = i; k < pick.size(); ++k) pick[k] = pick[k - 1] + 1;
    }

    std::map<std::vector<int>, IntVec> found;
    for (const auto& ray : rays) {
      std::vector<IntVec> local;
      for (const auto& e : normals) {
        if (dot(e, ray).is_zero()) local.push_back(e);
      }
      // Copy: recursion may rehash the memo.
      std::vector<IntVec> local_witnesses = witnesses(local);
      for (int orientation : {1, -1}) {
        for (const auto& c_local : local_witnesses) {
          Integer big = 1;
          for (const auto& e : normals) big = std::max(big, Integer(abs(dot(c_local, e)) + 1));
          IntVec c = c_local;
          axpy(c, big * orientation, ray);
          c = primitive(c);
          std::vector<int> signs;
          signs.reserve(m);
          for (const auto& e : normals) signs.push_back(dot(c, e).sign());
          found.emplace(std::move(signs), std::move(c));
        }
      }
    }
    std::vector<IntVec> out;
    out.reserve(found.size());
    for (auto& [signs, c] : found) out.push_back(std::move(c));
    return out;
  }

  std::size_t dim_;
  std::map<std::vector<IntVec>, std::vector<IntVec>, std::less<>> memo_;
};

}  // namespace detail

/// Every vertex of zone(D) for D in Z^d, sorted by vertex. Zero, repeated
/// and parallel generators are allowed; a zero generator is given sign +1.
inline std::vector<ZonotopeVertex> zonotope_vertices(const std::vector<IntVec>& generators, std::size_t d,
                                                     const ZonotopeOptions& opts = {}) {
  if (d > opts.max_dim) {
    throw GuardExceeded("zonotope_vertices: dimension " + std::to_string(d) + " exceeds cap " +
                        std::to_string(opts.max_dim));
  }
  for (const auto& e : generators) {
    if (e.size() != d) throw DimensionError("zonotope_vertices: generator length differs from d");
  }
  std::vector<IntVec> normals;
  for (const auto& e : generators) {
    if (!is_zero(e)) normals.push_back(sign_normalized(primitive(e)));
  }
  sort_unique(normals);

  detail::ChamberFinder finder(d);
  std::vector<ZonotopeVertex> out;
  for (const auto& c : finder.witnesses(normals)) {
    ZonotopeVertex v{zeros(d), c, {}};
    v.signs.reserve(generators.size());
    for (const auto& e : generators) {
      int s = dot(c, e).sign();
      if (s == 0) s = 1;
      v.signs.push_back(s);
      axpy(v.vertex, s, e);
    }
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end(),
            [](const ZonotopeVertex& a, const ZonotopeVertex& b) { return lex_less(a.vertex, b.vertex); });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].vertex == out[i - 1].vertex) {
      throw InconsistencyError("zonotope_vertices: two chambers produced the same vertex");
    }
  }
  return out;
}

/// Upper bound on the vertex count for |D| generators in general position in
/// dimension d: 2 * sum_{i<d} C(|D|-1, i).
inline Integer zonotope_vertex_bound(std::size_t generators, std::size_t d) {
  if (generators == 0) return 1;
  Integer total = 0, binom = 1;  // C(m-1, i)
  const std::size_t m = generators - 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (i > m) break;
    total += binom;
    binom = binom * (m - i) / (i + 1);
  }
  return 2 * total;
}

}  // namespace cnfold
