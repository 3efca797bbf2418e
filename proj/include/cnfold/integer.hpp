#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cnfold {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Dense integer vector. Length is fixed by whoever builds it; every
/// binary operation below checks it.
using IntVec = std::vector<Integer>;

// Errors

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configurable size cap was hit. Never a silent truncation.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an internal invariant breaks (e.g. a basis that is not a
/// Graver basis was handed to the decomposer).
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_same_length(const IntVec& a, const IntVec& b, const char* what) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
  }
}

inline IntVec zeros(std::size_t n) { return IntVec(n, Integer(0)); }

inline IntVec unit(std::size_t n, std::size_t i) {
  IntVec v = zeros(n);
  v.at(i) = 1;
  return v;
}

inline IntVec from_ints(std::initializer_list<long long> xs) {
  IntVec v;
  v.reserve(xs.size());
  for (long long x : xs) v.emplace_back(x);
  return v;
}

inline Integer dot(const IntVec& a, const IntVec& b) {
  require_same_length(a, b, "dot");
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  }
  return s;
}

inline IntVec operator+(const IntVec& a, const IntVec& b) {
  require_same_length(a, b, "add");
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline IntVec operator-(const IntVec& a, const IntVec& b) {
  require_same_length(a, b, "sub");
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline IntVec operator-(const IntVec& a) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline IntVec scaled(const IntVec& a, const Integer& k) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * k;
  return r;
}

// a += k * b
inline void axpy(IntVec& a, const Integer& k, const IntVec& b) {
  require_same_length(a, b, "axpy");
  if (k.is_zero()) return;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!b[i].is_zero()) a[i] += k * b[i];
  }
}

inline bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x.is_zero(); });
}

inline bool is_nonnegative(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x.sign() >= 0; });
}

inline Integer norm1(const IntVec& v) {
  Integer s = 0;
  for (const auto& x : v) s += abs(x);
  return s;
}

inline Integer norm_max(const IntVec& v) {
  Integer s = 0;
  for (const auto& x : v) s = std::max(s, Integer(abs(x)));
  return s;
}

inline Integer content(const IntVec& v) {
  Integer g = 0;
  for (const auto& x : v) {
    if (!x.is_zero()) g = gcd(g, x);
  }
  return abs(g);
}

/// Divide out the content; zero stays zero.
inline IntVec primitive(const IntVec& v) {
  Integer g = content(v);
  if (g <= 1) return v;
  IntVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / g;
  return r;
}

/// Flip the sign so the first nonzero entry is positive.
inline IntVec sign_normalized(const IntVec& v) {
  for (const auto& x : v) {
    if (x.sign() > 0) return v;
    if (x.sign() < 0) return -v;
  }
  return v;
}

inline bool first_nonzero_positive(const IntVec& v) {
  for (const auto& x : v) {
    if (!x.is_zero()) return x.sign() > 0;
  }
  return false;
}

/// Lexicographic order over entries (shorter vectors first on a common prefix).
inline bool lex_less(const IntVec& a, const IntVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct LexLess {
  bool operator()(const IntVec& a, const IntVec& b) const { return lex_less(a, b); }
};

inline void sort_unique(std::vector<IntVec>& vs) {
  std::sort(vs.begin(), vs.end(), LexLess{});
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

/// floor(a / b) for b != 0 (cpp_int division truncates toward zero).
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  Integer r = a - q * b;
  if (!r.is_zero() && ((r.sign() < 0) != (b.sign() < 0))) q -= 1;
  return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) { return -floor_div(-a, b); }

/// Nearest integer to a / b, ties toward +infinity.
inline Integer round_div(Integer a, Integer b) {
  if (b.sign() < 0) {
    a = -a;
    b = -b;
  }
  return floor_div(2 * a + b, 2 * b);
}

inline std::string to_string(const IntVec& v, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i].str();
  }
  return out;
}

// Oracle code paths enumerate with machine words.
inline bool fits_int64(const Integer& x) {
  return x >= Integer(std::numeric_limits<std::int64_t>::min()) &&
         x <= Integer(std::numeric_limits<std::int64_t>::max());
}

inline std::int64_t to_int64(const Integer& x) {
  if (!fits_int64(x)) throw GuardExceeded("integer does not fit in 64 bits: " + x.str());
  return x.convert_to<std::int64_t>();
}

}  // namespace cnfold
