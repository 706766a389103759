#pragma once

#include <span>
#include <vector>

#include "ldeform/linfty.hpp"

namespace ldeform {

// Polynomial path t ↦ Σ_n c_n tⁿ with exact Element coefficients.
class PolyPath {
 public:
  PolyPath() = default;
  explicit PolyPath(SpacePtr space);
  PolyPath(SpacePtr space, std::vector<Element> coeffs);

  // Σ d_n tⁿ/n!.
  static PolyPath from_derivatives(SpacePtr space, std::span<const Element> derivs);
  static PolyPath constant(const Element& x);

  const SpacePtr& space() const { return space_; }
  // Highest n with c_n ≠ 0, or -1 for the zero path.
  int degree() const;
  // Zero beyond the stored length.
  Element coeff(int n) const;
  const std::vector<Element>& coeffs() const { return coeffs_; }
  // n! c_n
  Element derivative_at_zero(int n) const;
  PolyPath derivative(int times = 1) const;
  PolyPath truncated(int order) const;
  Element at(const Rational& t) const;

  void add_term(int n, const Element& x);
  PolyPath& operator+=(const PolyPath& o);
  PolyPath& operator*=(const Rational& s);
  friend PolyPath operator+(PolyPath a, const PolyPath& b) { return a += b; }
  friend PolyPath operator*(const Rational& s, PolyPath a) { return a *= s; }
  friend bool operator==(const PolyPath& a, const PolyPath& b);

 private:
  void trim();

  SpacePtr space_;
  std::vector<Element> coeffs_;
};

// Products of degree above this are rejected.
inline constexpr int kPolyDegreeBudget = 64;

// b(P_1, .., P_k) as a polynomial, dropping tⁿ for n > order (order < 0 keeps all).
PolyPath eval_bracket_poly(const Bracket& b, std::span<const PolyPath> args, int order = -1);

// ℓ^{u}_{p}(args) = Σ_m (1/m!) ℓ_{p+m}(u^m, args) at a polynomial base point,
// where p = args.size().
PolyPath twisted_bracket_poly(const LInftyAlgebra& alg, const PolyPath& u, std::span<const PolyPath> args,
                              int order = -1);

// MC(u(t)) truncated at the given order.
PolyPath mc_poly(const LInftyAlgebra& alg, const PolyPath& u, int order = -1);

}  // namespace ldeform
