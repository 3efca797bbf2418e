#pragma once

// Application encoders: multiway transportation, bin packing with slack
// items, vector partition / balanced clustering.

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "cnfold/integer.hpp"
#include "cnfold/matrix.hpp"
#include "cnfold/nfold.hpp"
#include "cnfold/objective.hpp"

namespace cnfold {

// ---------------------------------------------------------------------------
// Multiway transportation

/// A k-way table of size m_1 x ... x m_{k-1} x n. The last axis is the layer
/// axis of the n-fold encoding. A margin key has one entry per axis: an
/// index, or kSummed for an axis that is summed over.
struct MultiwayInstance {
  static constexpr int kSummed = -1;

  std::size_t k = 0;
  std::vector<std::size_t> dims;           // m_1 .. m_{k-1}
  std::size_t n = 0;                       // layers
  std::vector<std::vector<int>> family;    // subsets of {1..k}, 1-based
  std::map<std::vector<int>, Integer> margins;
};

/// Flat n-fold vector (layer-major bricks of t = prod m_i) <-> table stored
/// row-major with the layer index last.
class TableCodec {
 public:
  TableCodec() = default;
  TableCodec(std::vector<std::size_t> dims, std::size_t n) : dims_(std::move(dims)), n_(n), t_(1) {
    for (auto m : dims_) t_ *= m;
  }

  std::size_t brick() const noexcept { return t_; }
  std::size_t layers() const noexcept { return n_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }

  IntVec decode(const IntVec& flat) const {
    if (flat.size() != t_ * n_) throw DimensionError("TableCodec::decode: length mismatch");
    IntVec table(flat.size());
    for (std::size_t l = 0; l < n_; ++l)
      for (std::size_t c = 0; c < t_; ++c) table[c * n_ + l] = flat[l * t_ + c];
    return table;
  }

  IntVec encode(const IntVec& table) const {
    if (table.size() != t_ * n_) throw DimensionError("TableCodec::encode: length mismatch");
    IntVec flat(table.size());
    for (std::size_t l = 0; l < n_; ++l)
      for (std::size_t c = 0; c < t_; ++c) flat[l * t_ + c] = table[c * n_ + l];
    return flat;
  }

 private:
  std::vector<std::size_t> dims_;
  std::size_t n_ = 0, t_ = 0;
};

struct MultiwayEncoding {
  NFoldStencil stencil;
  NFoldRhs rhs;
  TableCodec codec;
};

namespace detail {

// Mixed-radix odometer over the given sizes; calls fn(index vector).
template <class Fn>
void for_each_index(const std::vector<std::size_t>& sizes, Fn&& fn) {
  for (auto s : sizes) {
    if (s == 0) return;
  }
  std::vector<std::size_t> idx(sizes.size(), 0);
  while (true) {
    fn(idx);
    std::size_t i = sizes.size();
    while (i > 0 && ++idx[i - 1] == sizes[i - 1]) idx[--i] = 0;
    if (i == 0) return;
  }
}

inline std::vector<int> key_support(const std::vector<int>& key) {
  std::vector<int> support;
  for (std::size_t a = 0; a < key.size(); ++a) {
    if (key[a] != MultiwayInstance::kSummed) support.push_back(static_cast<int>(a) + 1);
  }
  return support;
}

}  // namespace detail

/// Sorted, deduplicated family with each member sorted.
inline std::vector<std::vector<int>> canonical_family(std::vector<std::vector<int>> family) {
  for (auto& f : family) {
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
  }
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());
  return family;
}

/// Margins with the layer axis summed become rows of A1; the rest become
/// rows of A2, one block per layer. Rows follow the canonical family order,
/// then the fixed indices in row-major order.
inline MultiwayEncoding build_multiway(const MultiwayInstance& inst) {
  const std::size_t k = inst.k;
  if (k < 2) throw DimensionError("build_multiway: need k >= 2");
  if (inst.dims.size() != k - 1) throw DimensionError("build_multiway: expected k-1 fixed dimensions");
  if (inst.n < 1) throw DimensionError("build_multiway: need at least one layer");
  const auto family = canonical_family(inst.family);
  for (const auto& f : family) {
    for (int a : f) {
      if (a < 1 || a > static_cast<int>(k)) throw DimensionError("build_multiway: family member outside {1..k}");
    }
  }
  std::vector<std::size_t> sizes = inst.dims;
  sizes.push_back(inst.n);
  for (const auto& [key, value] : inst.margins) {
    if (key.size() != k) throw DimensionError("build_multiway: margin key has wrong length");
    for (std::size_t a = 0; a < k; ++a) {
      if (key[a] != MultiwayInstance::kSummed && (key[a] < 0 || static_cast<std::size_t>(key[a]) >= sizes[a])) {
        throw DimensionError("build_multiway: margin index out of range");
      }
    }
    if (!std::binary_search(family.begin(), family.end(), detail::key_support(key))) {
      throw DimensionError("build_multiway: margin support is not in the family");
    }
    if (value.sign() < 0) throw DimensionError("build_multiway: negative margin");
  }
  auto margin = [&](const std::vector<int>& key) -> const Integer& {
    auto it = inst.margins.find(key);
    if (it == inst.margins.end()) throw DimensionError("build_multiway: missing margin " + [&] {
      std::string s;
      for (int v : key) s += (v == MultiwayInstance::kSummed ? std::string("+") : std::to_string(v)) + " ";
      return s;
    }());
    return it->second;
  };

  const TableCodec codec(inst.dims, inst.n);
  const std::size_t t = codec.brick();
  std::vector<IntVec> top, bottom;
  IntVec b0;
  std::vector<std::vector<int>> bottom_keys;  // layer entry left as kSummed

  for (const auto& f : family) {
    const bool layered = std::find(f.begin(), f.end(), static_cast<int>(k)) != f.end();
    std::vector<std::size_t> fixed_sizes;
    for (int a : f) {
      if (a != static_cast<int>(k)) fixed_sizes.push_back(inst.dims[a - 1]);
    }
    detail::for_each_index(fixed_sizes, [&](const std::vector<std::size_t>& fixed) {
      std::vector<int> key(k, MultiwayInstance::kSummed);
      std::size_t pos = 0;
      for (int a : f) {
        if (a != static_cast<int>(k)) key[a - 1] = static_cast<int>(fixed[pos++]);
      }
      IntVec row = zeros(t);
      detail::for_each_index(inst.dims, [&](const std::vector<std::size_t>& cell) {
        for (std::size_t a = 0; a + 1 < k; ++a) {
          if (key[a] != MultiwayInstance::kSummed && static_cast<std::size_t>(key[a]) != cell[a]) return;
        }
        std::size_t c = 0;
        for (std::size_t a = 0; a + 1 < k; ++a) c = c * inst.dims[a] + cell[a];
        row[c] = 1;
      });
      if (layered) {
        bottom.push_back(std::move(row));
        bottom_keys.push_back(key);
      } else {
        top.push_back(std::move(row));
        b0.push_back(margin(key));
      }
    });
  }

  MultiwayEncoding enc{NFoldStencil(IntMat::from_rows(top, t), IntMat::from_rows(bottom, t)), {}, codec};
  enc.rhs.b0 = std::move(b0);
  for (std::size_t l = 0; l < inst.n; ++l) {
    IntVec layer;
    for (auto key : bottom_keys) {
      key[k - 1] = static_cast<int>(l);
      layer.push_back(margin(key));
    }
    enc.rhs.layers.push_back(std::move(layer));
  }
  return enc;
}

/// 3-way p x q x n tables with all three line-sum families fixed:
/// u (p x q, summed over layers), v (p x n), z (q x n).
inline MultiwayEncoding build_threeway(std::size_t p, std::size_t q, std::size_t n, const IntMat& u, const IntMat& v,
                                       const IntMat& z) {
  if (u.rows() != p || u.cols() != q || v.rows() != p || v.cols() != n || z.rows() != q || z.cols() != n) {
    throw DimensionError("build_threeway: margin shapes must be p x q, p x n, q x n");
  }
  MultiwayInstance inst;
  inst.k = 3;
  inst.dims = {p, q};
  inst.n = n;
  inst.family = {{1, 2}, {1, 3}, {2, 3}};
  const int s = MultiwayInstance::kSummed;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j) inst.margins[{int(i), int(j), s}] = u(i, j);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t l = 0; l < n; ++l) inst.margins[{int(i), s, int(l)}] = v(i, l);
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t l = 0; l < n; ++l) inst.margins[{s, int(j), int(l)}] = z(j, l);
  return build_multiway(inst);
}

/// Every margin of a given table, for each member of the family. Handy for
/// building consistent instances.
inline std::map<std::vector<int>, Integer> table_margins(const std::vector<std::size_t>& dims, std::size_t n,
                                                         const std::vector<std::vector<int>>& family,
                                                         const IntVec& table) {
  std::vector<std::size_t> sizes = dims;
  sizes.push_back(n);
  std::size_t cells = 1;
  for (auto s : sizes) cells *= s;
  if (table.size() != cells) throw DimensionError("table_margins: table size mismatch");
  std::map<std::vector<int>, Integer> out;
  for (const auto& f : canonical_family(family)) {
    std::vector<std::size_t> fixed_sizes;
    for (int a : f) fixed_sizes.push_back(sizes[a - 1]);
    detail::for_each_index(fixed_sizes, [&](const std::vector<std::size_t>& fixed) {
      std::vector<int> key(sizes.size(), MultiwayInstance::kSummed);
      for (std::size_t i = 0; i < f.size(); ++i) key[f[i] - 1] = static_cast<int>(fixed[i]);
      out[key] = 0;
    });
  }
  std::size_t flat = 0;
  detail::for_each_index(sizes, [&](const std::vector<std::size_t>& cell) {
    for (auto& [key, value] : out) {
      bool match = true;
      for (std::size_t a = 0; a < sizes.size() && match; ++a) {
        match = key[a] == MultiwayInstance::kSummed || static_cast<std::size_t>(key[a]) == cell[a];
      }
      if (match) value += table[flat];
    }
    ++flat;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Bin packing

/// Item types with positive weights and counts, and n bins with capacities.
/// Bins must be filled exactly; the encoder adds unit-weight slack items
/// to take up the unused capacity.
struct PackingInstance {
  IntVec weights;     // v_1 .. v_T
  IntVec counts;      // n_1 .. n_T
  IntVec capacities;  // u_1 .. u_n
};

struct PackingEncoding {
  NFoldStencil stencil;  // t = T + 1, the slack type last
  NFoldRhs rhs;
  Integer slack = 0;       // number of slack items
  bool infeasible = false;  // capacities cannot hold the items

  std::size_t types() const noexcept { return stencil.t; }
  std::size_t bins() const noexcept { return rhs.layers.size(); }

  /// Utility matrices (T x n, entry [j][k] = value of one type-j item in bin
  /// k) to objective rows over the n-fold variables; slack has utility 0.
  ObjectiveWeights lift_utilities(const std::vector<IntMat>& utilities) const {
    const std::size_t t = types(), n = bins();
    IntMat w(utilities.size(), n * t);
    for (std::size_t i = 0; i < utilities.size(); ++i) {
      if (utilities[i].rows() != t - 1 || utilities[i].cols() != n) {
        throw DimensionError("lift_utilities: utility matrix must be types x bins");
      }
      for (std::size_t j = 0; j + 1 < t; ++j)
        for (std::size_t k = 0; k < n; ++k) w(i, k * t + j) = utilities[i](j, k);
    }
    return ObjectiveWeights(std::move(w));
  }

  /// Flat solution to a (T+1) x n matrix of item counts (last row: slack).
  IntMat decode(const IntVec& x) const {
    const std::size_t t = types(), n = bins();
    if (x.size() != n * t) throw DimensionError("PackingEncoding::decode: length mismatch");
    IntMat out(t, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < t; ++j) out(j, k) = x[k * t + j];
    return out;
  }

  IntVec encode(const IntMat& assignment) const {
    const std::size_t t = types(), n = bins();
    if (assignment.rows() != t || assignment.cols() != n) throw DimensionError("PackingEncoding::encode: shape");
    IntVec x(n * t);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < t; ++j) x[k * t + j] = assignment(j, k);
    return x;
  }
};

inline PackingEncoding build_packing(const PackingInstance& inst) {
  const std::size_t types = inst.weights.size();
  if (inst.counts.size() != types) throw DimensionError("build_packing: weights and counts differ in length");
  if (inst.capacities.empty()) throw DimensionError("build_packing: need at least one bin");
  Integer residual = 0;
  for (const auto& u : inst.capacities) {
    if (u.sign() < 0) throw DimensionError("build_packing: negative capacity");
    residual += u;
  }
  for (std::size_t j = 0; j < types; ++j) {
    if (inst.weights[j].sign() <= 0) throw DimensionError("build_packing: weights must be positive");
    if (inst.counts[j].sign() < 0) throw DimensionError("build_packing: negative item count");
    residual -= inst.counts[j] * inst.weights[j];
  }
  const std::size_t t = types + 1;
  IntVec v = inst.weights;
  v.push_back(1);
  PackingEncoding enc{NFoldStencil(IntMat::identity(t), IntMat::from_rows({v}, t)), {}, residual, residual.sign() < 0};
  enc.rhs.b0 = inst.counts;
  enc.rhs.b0.push_back(residual);
  for (const auto& u : inst.capacities) enc.rhs.layers.push_back({u});
  return enc;
}

// ---------------------------------------------------------------------------
// Vector partition and clustering

/// n items with vectors in Z^k shared among p players. With sizes set,
/// player h receives exactly sizes[h] items.
struct PartitionInstance {
  std::size_t p = 0;
  std::size_t k = 0;
  std::vector<IntVec> items;
  std::optional<IntVec> sizes;
};

/// assignment[i] = player receiving item i.
using Partition = std::vector<std::size_t>;

struct PartitionEncoding {
  NFoldStencil stencil;  // one layer per item, one brick entry per player
  NFoldRhs rhs;
  ObjectiveWeights weights;  // p*k rows; row h*k+j sums coordinate j over player h
  std::size_t p = 0, n = 0;

  Partition decode(const IntVec& x) const {
    if (x.size() != n * p) throw DimensionError("PartitionEncoding::decode: length mismatch");
    Partition out(n, p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t h = 0; h < p; ++h) {
        if (x[i * p + h] == 1) out[i] = h;
      }
    for (auto h : out) {
      if (h == p) throw DimensionError("PartitionEncoding::decode: item without a player");
    }
    return out;
  }

  IntVec encode(const Partition& pi) const {
    if (pi.size() != n) throw DimensionError("PartitionEncoding::encode: length mismatch");
    IntVec x = zeros(n * p);
    for (std::size_t i = 0; i < n; ++i) {
      if (pi[i] >= p) throw DimensionError("PartitionEncoding::encode: player out of range");
      x[i * p + pi[i]] = 1;
    }
    return x;
  }
};

inline PartitionEncoding build_partition(const PartitionInstance& inst) {
  const std::size_t p = inst.p, k = inst.k, n = inst.items.size();
  if (p < 1 || k < 1) throw DimensionError("build_partition: need p >= 1 and k >= 1");
  if (n < 1) throw DimensionError("build_partition: need at least one item");
  for (const auto& v : inst.items) {
    if (v.size() != k) throw DimensionError("build_partition: item vector length differs from k");
  }
  IntMat top(0, p);
  IntVec b0;
  if (inst.sizes) {
    if (inst.sizes->size() != p) throw DimensionError("build_partition: need one size per player");
    Integer total = 0;
    for (const auto& l : *inst.sizes) {
      if (l.sign() < 0) throw DimensionError("build_partition: negative cluster size");
      total += l;
    }
    if (total != n) throw DimensionError("build_partition: cluster sizes must sum to the item count");
    top = IntMat::identity(p);
    b0 = *inst.sizes;
  }
  IntMat w(p * k, n * p);
  for (std::size_t h = 0; h < p; ++h)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < n; ++i) w(h * k + j, i * p + h) = inst.items[i][j];
  PartitionEncoding enc{NFoldStencil(std::move(top), IntMat::from_rows({IntVec(p, 1)}, p)), {}, ObjectiveWeights(std::move(w)),
                        p, n};
  enc.rhs.b0 = std::move(b0);
  enc.rhs.layers.assign(n, IntVec{1});
  return enc;
}

/// Sum over clusters of (1/|cluster|) * sum of squared distances to the
/// cluster mean, exactly. Empty clusters are an error unless the instance
/// fixes that cluster's size to 0.
inline Rational cluster_variance(const PartitionInstance& inst, const Partition& pi) {
  if (pi.size() != inst.items.size()) throw DimensionError("cluster_variance: partition length mismatch");
  std::vector<std::vector<std::size_t>> clusters(inst.p);
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] >= inst.p) throw DimensionError("cluster_variance: player out of range");
    clusters[pi[i]].push_back(i);
  }
  Rational total = 0;
  for (std::size_t h = 0; h < inst.p; ++h) {
    const auto& members = clusters[h];
    if (members.empty()) {
      if (inst.sizes && (*inst.sizes)[h].is_zero()) continue;
      throw DimensionError("cluster_variance: empty cluster " + std::to_string(h));
    }
    const Integer size = members.size();
    IntVec sum = zeros(inst.k);
    Integer squares = 0;
    for (auto i : members) {
      sum = sum + inst.items[i];
      squares += dot(inst.items[i], inst.items[i]);
    }
    // (1/s) * (sum |v|^2 - |S|^2 / s)
    total += (Rational(squares) - Rational(dot(sum, sum), size)) / size;
  }
  return total;
}

/// Every partition of n items into p labelled clusters, optionally with the
/// given sizes, in lexicographic order of the assignment vector.
inline std::vector<Partition> enumerate_partitions(std::size_t n, std::size_t p,
                                                   const std::optional<IntVec>& sizes = std::nullopt) {
  std::vector<Partition> out;
  Partition pi(n, 0);
  std::vector<std::size_t> used(p, 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      out.push_back(pi);
      return;
    }
    for (std::size_t h = 0; h < p; ++h) {
      if (sizes && Integer(used[h]) >= (*sizes)[h]) continue;
      pi[i] = h;
      ++used[h];
      self(self, i + 1);
      --used[h];
    }
  };
  rec(rec, 0);
  if (sizes) {
    std::erase_if(out, [&](const Partition& q) {
      std::vector<std::size_t> count(p, 0);
      for (auto h : q) ++count[h];
      for (std::size_t h = 0; h < p; ++h) {
        if (Integer(count[h]) != (*sizes)[h]) return true;
      }
      return false;
    });
  }
  return out;
}

}  // namespace cnfold
