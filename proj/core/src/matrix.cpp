#include "ldeform/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace ldeform {

RowEchelon rref(RationalMatrix m) {
  RowEchelon out;
  const int rows = m.rows();
  const int cols = m.cols();
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot = -1;
    for (int i = r; i < rows; ++i)
      if (sgn(m(i, c)) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != r)
      for (int j = 0; j < cols; ++j) std::swap(m(pivot, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (int j = c; j < cols; ++j) m(r, j) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c);
      for (int j = c; j < cols; ++j)
        if (sgn(m(r, j)) != 0) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

int rank(const RationalMatrix& m) { return static_cast<int>(rref(m).pivots.size()); }

std::vector<std::vector<Rational>> nullspace_basis(const RationalMatrix& m) {
  auto ech = rref(m);
  const int cols = m.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int p : ech.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<std::vector<Rational>> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    std::vector<Rational> v(static_cast<std::size_t>(cols));
    v[static_cast<std::size_t>(f)] = 1;
    for (std::size_t r = 0; r < ech.pivots.size(); ++r)
      v[static_cast<std::size_t>(ech.pivots[r])] = -ech.reduced(static_cast<int>(r), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Rational>> solve(const RationalMatrix& m, std::span<const Rational> rhs) {
  if (static_cast<int>(rhs.size()) != m.rows())
    throw std::invalid_argument("right-hand side of size " + std::to_string(rhs.size()) +
                                " for a " + m.shape() + " system");
  RationalMatrix aug(m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = rhs[static_cast<std::size_t>(i)];
  }
  auto ech = rref(std::move(aug));
  if (!ech.pivots.empty() && ech.pivots.back() == m.cols()) return std::nullopt;
  std::vector<Rational> x(static_cast<std::size_t>(m.cols()));
  for (std::size_t r = 0; r < ech.pivots.size(); ++r)
    x[static_cast<std::size_t>(ech.pivots[r])] = ech.reduced(static_cast<int>(r), m.cols());
  return x;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square " + m.shape());
  const int n = m.rows();
  RationalMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto ech = rref(std::move(aug));
  if (static_cast<int>(ech.pivots.size()) < n || (n > 0 && ech.pivots[static_cast<std::size_t>(n - 1)] >= n))
    return std::nullopt;
  RationalMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = ech.reduced(i, n + j);
  return inv;
}

std::vector<int> independent_columns(const RationalMatrix& m) { return rref(m).pivots; }

// ---------------------------------------------------------------------------

FloatMatrix to_float(const RationalMatrix& m) {
  FloatMatrix f(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) f(i, j) = m(i, j).get_d();
  return f;
}

std::optional<FloatMatrix> inverse(const FloatMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square " + m.shape());
  const int n = m.rows();
  FloatMatrix a = m;
  FloatMatrix inv = FloatMatrix::identity(n);
  const double scale = std::max(1.0, max_abs(m));
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int i = c + 1; i < n; ++i)
      if (std::abs(a(i, c)) > std::abs(a(p, c))) p = i;
    if (std::abs(a(p, c)) <= tol * scale) return std::nullopt;
    if (p != c)
      for (int j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    const double d = a(c, c);
    for (int j = 0; j < n; ++j) {
      a(c, j) /= d;
      inv(c, j) /= d;
    }
    for (int i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0.0) continue;
      const double f = a(i, c);
      for (int j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

FloatMatrix expm(const FloatMatrix& a, double tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm of non-square " + a.shape());
  const int n = a.rows();
  const double norm = inf_norm(a);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  FloatMatrix scaled = std::ldexp(1.0, -squarings) * a;
  FloatMatrix result = FloatMatrix::identity(n);
  FloatMatrix term = FloatMatrix::identity(n);
  for (int k = 1; k < 64; ++k) {
    term = (1.0 / k) * (term * scaled);
    result += term;
    if (inf_norm(term) <= tol * inf_norm(result)) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

double inf_norm(const FloatMatrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    double row = 0.0;
    for (int j = 0; j < m.cols(); ++j) row += std::abs(m(i, j));
    best = std::max(best, row);
  }
  return best;
}

double inf_norm(const RationalMatrix& m) {
  Rational best = 0;
  for (int i = 0; i < m.rows(); ++i) {
    Rational row = 0;
    for (int j = 0; j < m.cols(); ++j) row += abs(m(i, j));
    if (row > best) best = row;
  }
  return best.get_d();
}

double max_abs(const FloatMatrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) best = std::max(best, std::abs(m(i, j)));
  return best;
}

}  // namespace ldeform
