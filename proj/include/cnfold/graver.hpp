#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "cnfold/integer.hpp"
#include "cnfold/lattice.hpp"
#include "cnfold/matrix.hpp"

namespace cnfold {

/// u ⊑ v: same orthant and |u_i| <= |v_i| everywhere.
inline bool conformal_leq(const IntVec& u, const IntVec& v) {
  require_same_length(u, v, "conformal_leq");
  for (std::size_t i = 0; i < u.size(); ++i) {
    int su = u[i].sign();
    if (su == 0) continue;
    if (su * v[i].sign() <= 0) return false;
    if (abs(u[i]) > abs(v[i])) return false;
  }
  return true;
}

/// The Graver basis of a matrix: the full sign-symmetric set of ⊑-minimal
/// nonzero kernel vectors, held in lexicographic order.
class GraverBasis {
 public:
  GraverBasis() = default;
  GraverBasis(IntMat source, std::vector<IntVec> elements)
      : source_(std::move(source)), elements_(std::move(elements)) {
    sort_unique(elements_);
  }

  const IntMat& source() const noexcept { return source_; }
  const std::vector<IntVec>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  std::size_t dimension() const noexcept { return source_.cols(); }

  bool contains(const IntVec& v) const {
    return std::binary_search(elements_.begin(), elements_.end(), v, LexLess{});
  }

  /// One representative per ± pair (first nonzero entry positive), sorted.
  std::vector<IntVec> canonical() const {
    std::vector<IntVec> out;
    for (const auto& e : elements_) {
      if (first_nonzero_positive(e)) out.push_back(e);
    }
    return out;
  }

  /// Canonical representatives as the rows of a matrix (file output form).
  IntMat canonical_matrix() const { return IntMat::from_rows(canonical(), dimension()); }

 private:
  IntMat source_;
  std::vector<IntVec> elements_;
};

struct GraverOptions {
  std::size_t max_elements = 1'000'000;
};

namespace detail {

/// Sign pattern bitsets for fast conformality pre-checks.
struct SignMask {
  std::vector<std::uint64_t> pos, neg;

  explicit SignMask(const IntVec& v) : pos((v.size() + 63) / 64), neg((v.size() + 63) / 64) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      int s = v[i].sign();
      if (s > 0) pos[i / 64] |= std::uint64_t{1} << (i % 64);
      if (s < 0) neg[i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }

  // Can (sign * this) be ⊑ other, judging by supports only?
  bool support_within(const SignMask& other, int sign) const {
    const auto& p = sign > 0 ? pos : neg;
    const auto& n = sign > 0 ? neg : pos;
    for (std::size_t w = 0; w < pos.size(); ++w) {
      if ((p[w] & ~other.pos[w]) || (n[w] & ~other.neg[w])) return false;
    }
    return true;
  }

  // Do a and (sign * b) disagree in sign somewhere?
  static bool conflict(const SignMask& a, const SignMask& b, int sign) {
    const auto& bp = sign > 0 ? b.pos : b.neg;
    const auto& bn = sign > 0 ? b.neg : b.pos;
    for (std::size_t w = 0; w < a.pos.size(); ++w) {
      if ((a.pos[w] & bn[w]) || (a.neg[w] & bp[w])) return true;
    }
    return false;
  }
};

struct Element {
  IntVec v;
  SignMask mask;
  explicit Element(IntVec x) : v(std::move(x)), mask(v) {}
};

// |sign * r_i| <= |s_i| on supp(r); masks already matched.
inline bool magnitudes_within(const IntVec& r, const IntVec& s) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!r[i].is_zero() && abs(r[i]) > abs(s[i])) return false;
  }
  return true;
}

// Largest k with k*|r| <= |s| componentwise on supp(r).
inline Integer max_multiple(const IntVec& r, const IntVec& s) {
  Integer k = -1;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i].is_zero()) continue;
    Integer q = abs(s[i]) / abs(r[i]);
    if (k < 0 || q < k) k = q;
  }
  return k;
}

/// Reduce s by ±reps until nothing in ±reps is conformal to it.
inline IntVec normal_form(IntVec s, const std::vector<Element>& reps) {
  SignMask sm(s);
  bool reduced = true;
  while (reduced && !is_zero(s)) {
    reduced = false;
    for (const auto& r : reps) {
      for (int sign : {1, -1}) {
        if (!r.mask.support_within(sm, sign)) continue;
        if (!magnitudes_within(r.v, s)) continue;
        Integer k = max_multiple(r.v, s);
        axpy(s, -k * sign, r.v);
        sm = SignMask(s);
        reduced = true;
        break;
      }
      if (is_zero(s)) break;
    }
  }
  return s;
}

inline std::uint64_t norm_key(const IntVec& v) {
  Integer n = norm1(v);
  if (n > Integer(std::numeric_limits<std::uint64_t>::max())) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return n.convert_to<std::uint64_t>();
}

/// Keep only ⊑-minimal vectors of a sign-symmetric set.
inline std::vector<IntVec> minimal_elements(std::vector<IntVec> vs) {
  sort_unique(vs);
  std::vector<SignMask> masks;
  masks.reserve(vs.size());
  for (const auto& v : vs) masks.emplace_back(v);
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    bool minimal = !is_zero(vs[i]);
    for (std::size_t j = 0; j < vs.size() && minimal; ++j) {
      if (i == j || !masks[j].support_within(masks[i], 1)) continue;
      if (magnitudes_within(vs[j], vs[i]) && !is_zero(vs[j])) minimal = false;
    }
    if (minimal) out.push_back(vs[i]);
  }
  return out;
}

}  // namespace detail

/// Graver basis by normal-form completion, seeded with a lattice basis of
/// the kernel. Pairs are processed in order of increasing 1-norm of their
/// sum; only sign-conflicting pairs are formed since a same-orthant sum
/// always reduces to zero.
inline GraverBasis graver_basis(const IntMat& a, const GraverOptions& opts = {}) {
  using detail::Element;
  using detail::SignMask;

  std::vector<Element> reps;
  struct Pair {
    std::uint64_t key;
    std::size_t i, j;
    int sign;  // candidate = reps[i] + sign * reps[j]
    bool operator>(const Pair& o) const {
      if (key != o.key) return key > o.key;
      if (i != o.i) return i > o.i;
      if (j != o.j) return j > o.j;
      return sign < o.sign;
    }
  };
  std::priority_queue<Pair, std::vector<Pair>, std::greater<>> queue;

  auto guard = [&] {
    if (2 * reps.size() > opts.max_elements) {
      throw GuardExceeded("graver_basis: basis cardinality exceeds cap of " +
                          std::to_string(opts.max_elements));
    }
  };

  auto add = [&](IntVec v) {
    reps.emplace_back(sign_normalized(std::move(v)));
    guard();
    std::size_t i = reps.size() - 1;
    for (std::size_t j = 0; j < i; ++j) {
      for (int sign : {1, -1}) {
        if (!SignMask::conflict(reps[i].mask, reps[j].mask, sign)) continue;
        IntVec sum = reps[i].v;
        axpy(sum, sign, reps[j].v);
        queue.push(Pair{detail::norm_key(sum), i, j, sign});
      }
    }
  };

  for (auto& k : lattice_kernel_basis(a)) {
    IntVec nf = detail::normal_form(k, reps);
    if (!is_zero(nf)) add(std::move(nf));
  }

  while (!queue.empty()) {
    Pair p = queue.top();
    queue.pop();
    IntVec sum = reps[p.i].v;
    axpy(sum, p.sign, reps[p.j].v);
    IntVec nf = detail::normal_form(std::move(sum), reps);
    if (!is_zero(nf)) add(std::move(nf));
  }

  std::vector<IntVec> all;
  all.reserve(2 * reps.size());
  for (const auto& r : reps) {
    all.push_back(r.v);
    all.push_back(-r.v);
  }
  return GraverBasis(a, detail::minimal_elements(std::move(all)));
}

/// Exhaustive oracle: all ⊑-minimal nonzero kernel points in [-box, box]^n.
/// Exact whenever every true Graver element fits in the box.
inline GraverBasis brute_force_graver(const IntMat& a, std::int64_t box,
                                      std::uint64_t max_points = 50'000'000) {
  const std::size_t n = a.cols(), m = a.rows();
  if (box < 1) throw DimensionError("brute_force_graver: box must be positive");
  long double count = 1;
  for (std::size_t j = 0; j < n; ++j) count *= static_cast<long double>(2 * box + 1);
  if (count > static_cast<long double>(max_points)) {
    throw GuardExceeded("brute_force_graver: box enumeration exceeds budget");
  }
  std::vector<std::vector<std::int64_t>> cols(n, std::vector<std::int64_t>(m));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) cols[j][i] = to_int64(a(i, j));

  std::vector<IntVec> kernel;
  std::vector<std::int64_t> x(n, -box);
  std::vector<std::int64_t> ax(m, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) ax[i] += cols[j][i] * x[j];
  while (true) {
    bool zero_image = std::all_of(ax.begin(), ax.end(), [](std::int64_t v) { return v == 0; });
    bool nonzero = std::any_of(x.begin(), x.end(), [](std::int64_t v) { return v != 0; });
    if (zero_image && nonzero) {
      IntVec v(n);
      for (std::size_t j = 0; j < n; ++j) v[j] = x[j];
      kernel.push_back(std::move(v));
    }
    std::size_t j = 0;
    for (; j < n; ++j) {
      if (x[j] < box) {
        ++x[j];
        for (std::size_t i = 0; i < m; ++i) ax[i] += cols[j][i];
        break;
      }
      for (std::size_t i = 0; i < m; ++i) ax[i] -= cols[j][i] * 2 * box;
      x[j] = -box;
    }
    if (j == n) break;
  }
  return GraverBasis(a, detail::minimal_elements(std::move(kernel)));
}

/// Greedy conformal decomposition of a kernel vector into basis elements.
/// Parts are listed in the order they were peeled off.
inline std::vector<IntVec> conformal_decompose(const IntVec& g, const GraverBasis& basis) {
  if (g.size() != basis.dimension()) throw DimensionError("conformal_decompose: length mismatch");
  std::vector<IntVec> parts;
  IntVec rest = g;
  while (!is_zero(rest)) {
    const IntVec* hit = nullptr;
    for (const auto& e : basis.elements()) {
      if (conformal_leq(e, rest)) {
        hit = &e;
        break;
      }
    }
    if (!hit) {
      throw InconsistencyError("conformal_decompose: no basis element is conformal to remainder (" +
                               to_string(rest) + "); basis is not a Graver basis of this kernel");
    }
    parts.push_back(*hit);
    rest = rest - *hit;
  }
  return parts;
}

}  // namespace cnfold
