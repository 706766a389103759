#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldeform/rational.hpp"

namespace ldeform {

// Dense row-major matrix over an exact or floating scalar.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  S& operator()(int r, int c) { return data_[index(r, c)]; }
  const S& operator()(int r, int c) const { return data_[index(r, c)]; }

  std::vector<S> column(int c) const {
    std::vector<S> v(static_cast<std::size_t>(rows_));
    for (int r = 0; r < rows_; ++r) v[static_cast<std::size_t>(r)] = (*this)(r, c);
    return v;
  }
  void set_column(int c, std::span<const S> v) {
    check_size(static_cast<int>(v.size()), rows_, "column");
    for (int r = 0; r < rows_; ++r) (*this)(r, c) = v[static_cast<std::size_t>(r)];
  }

  std::vector<S> apply(std::span<const S> x) const {
    check_size(static_cast<int>(x.size()), cols_, "vector");
    std::vector<S> y(static_cast<std::size_t>(rows_));
    for (int r = 0; r < rows_; ++r) {
      S acc(0);
      for (int c = 0; c < cols_; ++c) acc += (*this)(r, c) * x[static_cast<std::size_t>(c)];
      y[static_cast<std::size_t>(r)] = acc;
    }
    return y;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (x != S(0)) return false;
    return true;
  }

  Matrix& operator+=(const Matrix& o) {
    same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const S& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const S& s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw std::invalid_argument("matrix product of " + a.shape() + " and " + b.shape());
    Matrix p(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (aik == S(0)) continue;
        for (int j = 0; j < b.cols_; ++j) p(i, j) += aik * b(k, j);
      }
    return p;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
  }
  static void check_size(int got, int want, const char* what) {
    if (got != want)
      throw std::invalid_argument(std::string(what) + " of size " + std::to_string(got) +
                                  ", expected " + std::to_string(want));
  }
  void same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("shape mismatch: " + shape() + " vs " + o.shape());
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<S> data_;
};

using RationalMatrix = Matrix<Rational>;
using FloatMatrix = Matrix<double>;

// ---- exact kernels over Q ---------------------------------------------------

struct RowEchelon {
  RationalMatrix reduced;   // reduced row echelon form
  std::vector<int> pivots;  // pivot column of each nonzero row
};

RowEchelon rref(RationalMatrix m);
int rank(const RationalMatrix& m);
// Basis of {x : m x = 0}, one vector per free column.
std::vector<std::vector<Rational>> nullspace_basis(const RationalMatrix& m);
// One solution of m x = rhs, or nullopt when inconsistent.
std::optional<std::vector<Rational>> solve(const RationalMatrix& m, std::span<const Rational> rhs);
std::optional<RationalMatrix> inverse(const RationalMatrix& m);

// Columns of m that are linearly independent, chosen greedily left to right.
std::vector<int> independent_columns(const RationalMatrix& m);

// ---- floating point ---------------------------------------------------------

FloatMatrix to_float(const RationalMatrix& m);
// Gauss-Jordan with partial pivoting; nullopt when a pivot falls below tol·scale.
std::optional<FloatMatrix> inverse(const FloatMatrix& m, double tol = 1e-13);
// Scaling and squaring with a truncated Taylor series.
FloatMatrix expm(const FloatMatrix& a, double tol = 1e-14);

// Operator norm induced by the max norm (max absolute row sum).
double inf_norm(const FloatMatrix& m);
double inf_norm(const RationalMatrix& m);
double max_abs(const FloatMatrix& m);

}  // namespace ldeform
