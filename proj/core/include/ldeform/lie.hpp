#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ldeform/linfty.hpp"
#include "ldeform/matrix.hpp"

namespace ldeform {

// Increasing k-tuples of {0..n-1} in lexicographic order, and the position of one.
std::vector<std::vector<int>> increasing_tuples(int n, int k);
int tuple_rank(int n, std::span<const int> tuple);
// dim Hom(Λᵏ Rⁿ, Rⁿ)
int cochain_dim(int n, int k);

// Alternating k-linear map gⁿ × .. × gⁿ → gⁿ stored on increasing tuples:
// values[rank(T)·n + c] is the c-th coordinate of η(e_T).
template <class S>
class Cochain {
 public:
  Cochain() = default;
  Cochain(int n, int arity);
  Cochain(int n, int arity, std::vector<S> values);

  int n() const { return n_; }
  int arity() const { return arity_; }
  const std::vector<S>& values() const { return values_; }
  std::vector<S>& values() { return values_; }

  S& at(std::span<const int> increasing, int c);
  // η(e_{i_1}, .., e_{i_k}) for indices in any order.
  std::vector<S> on_basis(std::vector<int> idx) const;
  // Full multilinear evaluation.
  std::vector<S> eval(std::span<const std::vector<S>> args) const;

  Cochain& operator+=(const Cochain& o);
  Cochain& operator-=(const Cochain& o);
  Cochain& operator*=(const S& s);
  friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
  friend Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }
  friend Cochain operator*(const S& s, Cochain a) { return a *= s; }
  friend bool operator==(const Cochain& a, const Cochain& b) {
    return a.n_ == b.n_ && a.arity_ == b.arity_ && a.values_ == b.values_;
  }

 private:
  int n_ = 0;
  int arity_ = 0;
  std::vector<S> values_;
};

using LieStructure = Cochain<Rational>;
using FloatCochain = Cochain<double>;

struct StructureConstant {
  int i = 0;
  int j = 0;
  int k = 0;
  Rational coeff;
};

// μ(e_i, e_j) = Σ_k c e_k for i < j.
LieStructure lie_from_constants(int n, std::span<const StructureConstant> constants);
std::vector<StructureConstant> constants_of(const LieStructure& mu);

FloatCochain to_float(const Cochain<Rational>& c);

// Jac(μ)(x,y,z) = μ(μ(x,y),z) + μ(μ(y,z),x) + μ(μ(z,x),y).
template <class S>
Cochain<S> jacobiator_lie(const Cochain<S>& mu);

// (η·A)(x_1..x_k) = A⁻¹ η(A x_1, .., A x_k). Throws on singular A.
template <class S>
Cochain<S> gl_action(const Cochain<S>& eta, const Matrix<S>& A);

// C¹ ≅ gl(n): the cochain x ↦ A x, and back.
template <class S>
Cochain<S> endomorphism_cochain(const Matrix<S>& A);
template <class S>
Matrix<S> cochain_endomorphism(const Cochain<S>& c);

// Nijenhuis-Richardson composition and bracket.
template <class S>
Cochain<S> nr_compose(const Cochain<S>& P, const Cochain<S>& Q);
template <class S>
Cochain<S> nijenhuis_richardson(const Cochain<S>& P, const Cochain<S>& Q);

// d_e m_μ: C¹ → C², A ↦ μ(A·,·) + μ(·,A·) − A μ.
template <class S>
Matrix<S> action_derivative(const Cochain<S>& mu);
// d_μ Jac: C² → C³, v ↦ J(μ,v) + J(v,μ).
template <class S>
Matrix<S> jac_derivative(const Cochain<S>& mu);
// δ_μ: C³ → C⁴.
template <class S>
Matrix<S> ce_stabilizer(const Cochain<S>& mu);

// V₋₁ = C¹, V₀ = C², V₁ = C³, V₂ = C⁴.
SpacePtr deformation_space(int n);
Element cochain_element(const SpacePtr& space, const LieStructure& c);
LieStructure element_cochain(int n, const Element& x, int degree);

// d²Jac(v, w) = J(v,w) + J(w,v) on V₀ ⊙ V₀, as an arity-2 bracket on the deformation space.
Bracket jac_second(const LieStructure& mu0);

// Flat 3-strict algebra at a Lie structure μ₀. Throws when Jac(μ₀) ≠ 0.
LInftyAlgebra build_deformation_linfty(const LieStructure& mu0);

struct RigidityResult {
  int cohomology_dim = 0;  // at the C² slot
  int rank_action = 0;     // rank d_e m
  int kernel_jac = 0;      // dim ker dJac
  std::optional<HomotopyPair> homotopy;  // degree 0: h_low C² → C¹, h_high C³ → C²
  bool rigid() const { return cohomology_dim == 0; }
};
RigidityResult rigidity_check(const LieStructure& mu0);

// μ₀ · exp(h₁(v)) for v ∈ C².
FloatCochain orbit_parametrization(const LieStructure& mu0, const RationalMatrix& h1, std::span<const double> v);

struct PerturbedHomotopies {
  FloatMatrix h1;  // C² → C¹
  FloatMatrix h2;  // C³ → C²
  double neumann1 = 0;  // ‖(d_e m_{μ−μ₀}) h₁‖
  double neumann2 = 0;  // ‖(d_{μ−μ₀}Jac) h₂‖
  double residual = 0;  // max |d_e m_μ H₁ + H₂ d_μJac − Id|
};
// H₁ = h₁(1 + (d_e m_{μ−μ₀}) h₁)⁻¹, H₂ = h₂(1 + (d_{μ−μ₀}Jac) h₂)⁻¹.
// Throws std::domain_error when a Neumann norm reaches 1.
PerturbedHomotopies perturbed_homotopies(const HomotopyPair& h, const LieStructure& mu0, const FloatCochain& mu);

}  // namespace ldeform
