#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cnfold/integer.hpp"

namespace cnfold {

/// Dense row-major integer matrix.
class IntMat {
 public:
  IntMat() = default;
  IntMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  /// Build from explicit rows; all rows must share a length. `cols` is
  /// needed only to give a 0-row matrix a width.
  static IntMat from_rows(const std::vector<IntVec>& rows, std::size_t cols = 0) {
    if (!rows.empty()) cols = rows.front().size();
    IntMat m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionError("IntMat::from_rows: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static IntMat from_ints(std::initializer_list<std::initializer_list<long long>> rows) {
    std::vector<IntVec> rs;
    for (auto r : rows) rs.push_back(cnfold::from_ints(r));
    return from_rows(rs);
  }

  static IntMat identity(std::size_t n) {
    IntMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Integer> row_span(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  IntVec row(std::size_t i) const {
    auto s = row_span(i);
    return IntVec(s.begin(), s.end());
  }

  IntVec col(std::size_t j) const {
    IntVec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  std::vector<IntVec> row_vectors() const {
    std::vector<IntVec> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  IntMat transposed() const {
    IntMat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  const std::vector<Integer>& entries() const noexcept { return data_; }

  friend bool operator==(const IntMat&, const IntMat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

inline IntVec mat_vec(const IntMat& a, const IntVec& x) {
  if (a.cols() != x.size()) {
    throw DimensionError("mat_vec: matrix has " + std::to_string(a.cols()) +
                         " columns, vector has length " + std::to_string(x.size()));
  }
  IntVec y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Integer s = 0;
    auto r = a.row_span(i);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!r[j].is_zero() && !x[j].is_zero()) s += r[j] * x[j];
    }
    y[i] = std::move(s);
  }
  return y;
}

/// Stack `top` over `bottom`; column counts must agree.
inline IntMat vstack(const IntMat& top, const IntMat& bottom) {
  if (top.cols() != bottom.cols()) throw DimensionError("vstack: column counts differ");
  IntMat m(top.rows() + bottom.rows(), top.cols());
  for (std::size_t i = 0; i < top.rows(); ++i)
    for (std::size_t j = 0; j < top.cols(); ++j) m(i, j) = top(i, j);
  for (std::size_t i = 0; i < bottom.rows(); ++i)
    for (std::size_t j = 0; j < bottom.cols(); ++j) m(top.rows() + i, j) = bottom(i, j);
  return m;
}

// ---------------------------------------------------------------------------
// Text format (4ti2 style): "rows cols" then row-major entries.

inline void write_matrix(std::ostream& os, const IntMat& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m(i, j).str();
    }
    os << '\n';
  }
}

inline std::string matrix_to_string(const IntMat& m) {
  std::ostringstream os;
  write_matrix(os, m);
  return os.str();
}

namespace detail {

inline std::size_t read_count(std::istream& is, const char* what) {
  std::string tok;
  if (!(is >> tok)) throw ParseError(std::string("expected ") + what + ", got end of input");
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError(std::string("expected nonnegative ") + what + ", got '" + tok + "'");
  }
  return std::stoul(tok);
}

inline Integer read_integer(std::istream& is) {
  std::string tok;
  if (!(is >> tok)) throw ParseError("matrix: unexpected end of input");
  std::size_t start = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
  if (start == tok.size() || tok.find_first_not_of("0123456789", start) != std::string::npos) {
    throw ParseError("matrix: not an integer: '" + tok + "'");
  }
  if (tok[0] == '+') tok.erase(0, 1);
  return Integer(tok);
}

}  // namespace detail

/// Read one matrix block; trailing content is left in the stream.
inline IntMat read_matrix(std::istream& is) {
  std::size_t r = detail::read_count(is, "row count");
  std::size_t c = detail::read_count(is, "column count");
  IntMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = detail::read_integer(is);
  return m;
}

inline IntMat matrix_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_matrix(is);
}

/// Row-major flattening, used when a file carries a single vector.
inline IntVec flatten(const IntMat& m) { return m.entries(); }

inline IntMat as_row(const IntVec& v) { return IntMat::from_rows({v}, v.size()); }

}  // namespace cnfold
