#pragma once

#include <random>
#include <string>
#include <vector>

#include "cnfold/integer.hpp"
#include "cnfold/matrix.hpp"

namespace cnfold::testing {

inline IntVec V(std::initializer_list<long long> xs) { return from_ints(xs); }

inline IntMat M(std::initializer_list<std::initializer_list<long long>> rows) { return IntMat::from_ints(rows); }

inline long long uniform(std::mt19937& rng, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

inline IntMat random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, long long lo, long long hi) {
  IntMat a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = uniform(rng, lo, hi);
  return a;
}

inline IntVec random_vector(std::mt19937& rng, std::size_t n, long long lo, long long hi) {
  IntVec v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

inline std::vector<IntVec> sorted(std::vector<IntVec> vs) {
  sort_unique(vs);
  return vs;
}

// All integer points of [-box, box]^n.
template <class Fn>
void for_each_box_point(std::size_t n, long long box, Fn&& fn) {
  IntVec x(n, Integer(-box));
  while (true) {
    fn(x);
    std::size_t i = n;
    while (i > 0 && x[i - 1] == box) x[--i] = -box;
    if (i == 0) return;
    x[i - 1] += 1;
  }
}

}  // namespace cnfold::testing
