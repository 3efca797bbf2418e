#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cnfold/integer.hpp"
#include "cnfold/matrix.hpp"

namespace cnfold {

/// The d linear forms w_1..w_d on Z^n, stored as the rows of a d x n matrix.
class ObjectiveWeights {
 public:
  ObjectiveWeights() = default;
  explicit ObjectiveWeights(IntMat rows) : rows_(std::move(rows)) {
    if (rows_.rows() == 0) throw DimensionError("ObjectiveWeights: need at least one form");
  }

  std::size_t d() const noexcept { return rows_.rows(); }
  std::size_t n() const noexcept { return rows_.cols(); }
  const IntMat& matrix() const noexcept { return rows_; }

  /// x -> (w_1 x, ..., w_d x)
  IntVec project(const IntVec& x) const { return mat_vec(rows_, x); }

  /// Common positive rescaling of every form.
  ObjectiveWeights scaled(const Integer& k) const {
    IntMat m = rows_;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= k;
    return ObjectiveWeights(std::move(m));
  }

 private:
  IntMat rows_;
};

/// A convex function on Z^d known through comparisons; built-ins also carry
/// an exact evaluator. The comparison must be safe to call concurrently.
class ConvexObjective {
 public:
  using Compare = std::function<bool(const IntVec&, const IntVec&)>;  // c(y) <= c(z)
  using Evaluate = std::function<Integer(const IntVec&)>;

  static ConvexObjective from_comparison(std::string name, Compare leq) {
    ConvexObjective c;
    c.name_ = std::move(name);
    c.leq_ = std::move(leq);
    return c;
  }

  static ConvexObjective from_value(std::string name, Evaluate value) {
    ConvexObjective c;
    c.name_ = std::move(name);
    c.value_ = value;
    c.leq_ = [value](const IntVec& y, const IntVec& z) { return value(y) <= value(z); };
    return c;
  }

  bool leq(const IntVec& y, const IntVec& z) const { return leq_(y, z); }
  bool has_value() const noexcept { return static_cast<bool>(value_); }
  std::optional<Integer> value(const IntVec& z) const {
    if (!value_) return std::nullopt;
    return value_(z);
  }
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  Compare leq_;
  Evaluate value_;
};

inline ConvexObjective linear_objective(IntVec g) {
  return ConvexObjective::from_value("linear", [g = std::move(g)](const IntVec& z) { return dot(g, z); });
}

/// ||z||^2, the balanced-clustering surrogate.
inline ConvexObjective norm2_objective() {
  return ConvexObjective::from_value("norm2", [](const IntVec& z) { return dot(z, z); });
}

/// max_i (a_i · z + b_i); offsets may be empty (all zero).
inline ConvexObjective max_linear_objective(std::vector<IntVec> forms, IntVec offsets = {}) {
  if (forms.empty()) throw DimensionError("max_linear_objective: need at least one form");
  if (offsets.empty()) offsets = zeros(forms.size());
  if (offsets.size() != forms.size()) throw DimensionError("max_linear_objective: offsets length mismatch");
  return ConvexObjective::from_value("maxlin", [forms = std::move(forms), offsets = std::move(offsets)](
                                                   const IntVec& z) {
    Integer best = dot(forms[0], z) + offsets[0];
    for (std::size_t i = 1; i < forms.size(); ++i) best = std::max(best, Integer(dot(forms[i], z) + offsets[i]));
    return best;
  });
}

/// -min_i (a_i · z + b_i): maximizing it minimizes a concave min-of-forms.
inline ConvexObjective neg_min_linear_objective(std::vector<IntVec> forms, IntVec offsets = {}) {
  if (forms.empty()) throw DimensionError("neg_min_linear_objective: need at least one form");
  if (offsets.empty()) offsets = zeros(forms.size());
  if (offsets.size() != forms.size()) throw DimensionError("neg_min_linear_objective: offsets length mismatch");
  for (auto& f : forms) f = -f;
  for (auto& b : offsets) b = -b;
  ConvexObjective inner = max_linear_objective(std::move(forms), std::move(offsets));
  return ConvexObjective::from_value("negminlin", [inner](const IntVec& z) { return *inner.value(z); });
}

/// Shared tie-break: larger c wins; among c-equal candidates the
/// lexicographically smaller z, then the smaller x.
inline bool improves(const ConvexObjective& c, const IntVec& z, const IntVec& x, const IntVec& best_z,
                     const IntVec& best_x) {
  bool le = c.leq(z, best_z);
  if (!le) return true;
  bool ge = c.leq(best_z, z);
  if (!ge) return false;
  if (z != best_z) return lex_less(z, best_z);
  return lex_less(x, best_x);
}

}  // namespace cnfold
