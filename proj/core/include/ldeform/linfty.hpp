#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ldeform/graded.hpp"
#include "ldeform/matrix.hpp"

namespace ldeform {

// Curved L∞-algebra in the shifted convention: brackets ℓ_0..ℓ_{N-1}, all of
// degree +1, with ℓ_k = 0 for k >= N. Jacobi identities are checked on demand.
class LInftyAlgebra {
 public:
  LInftyAlgebra() = default;
  // brackets[k] must have arity k; missing trailing arities are empty.
  LInftyAlgebra(SpacePtr space, std::vector<Bracket> brackets, int strictness);

  const SpacePtr& space() const { return space_; }
  int strictness() const { return strictness_; }
  // Empty bracket for k >= N.
  const Bracket& bracket(int k) const;
  const Element& curvature() const { return curvature_; }
  bool is_flat() const { return curvature_.is_zero(); }

 private:
  SpacePtr space_;
  std::vector<Bracket> brackets_;
  int strictness_ = 0;
  Element curvature_;
  Bracket none_;
};

struct HomotopyPair {
  int degree = 0;
  RationalMatrix h_low;     // V_i -> V_{i-1}
  RationalMatrix h_high;    // V_{i+1} -> V_i
  RationalMatrix residual;  // δ h_low + h_high δ - Id on V_i
  bool exact() const { return residual.is_zero(); }
};

struct JacobiReport {
  std::map<int, Rational> max_violation;  // n -> largest |coefficient| of Jac_n on basis tuples
  std::optional<int> first_failure;
  bool ok() const { return !first_failure.has_value(); }
};

class CohomologyError : public std::domain_error {
 public:
  CohomologyError(int degree, int dimension);
  int degree() const { return degree_; }
  int dimension() const { return dimension_; }

 private:
  int degree_;
  int dimension_;
};

// All σ with σ(0)<..<σ(p-1) and σ(p)<..<σ(p+q-1), 0-based, lexicographic.
std::vector<std::vector<int>> enumerate_unshuffles(int p, int q);

// Jac_n(ℓ)(v_1..v_n) = Σ_{i=0..n} Σ_{σ ∈ S_{i,n-i}} ε_σ ℓ_{n-i+1}(ℓ_i(v_σ..), v_σ..).
// Arguments must be homogeneous.
Element jacobiator(const LInftyAlgebra& alg, int n, std::span<const Element> args);

// Checks Jac_n on all canonical basis tuples for n <= 2N-1.
JacobiReport verify_linfty(const LInftyAlgebra& alg);

// ℓ^u_p = Σ_k (1/k!) ℓ_{p+k}(u^k, ...). u must lie in V_0.
LInftyAlgebra twist(const LInftyAlgebra& alg, const Element& u);
// MC(u) = Σ_k (1/k!) ℓ_k(u^k).
Element mc_eval(const LInftyAlgebra& alg, const Element& u);

// Matrix of ℓ_1 : V_i -> V_{i+1} for every i with V_i or V_{i+1} nonzero.
std::map<int, RationalMatrix> differential_blocks(const LInftyAlgebra& alg);
// One block; zero-sized when either side is empty.
RationalMatrix differential_block(const LInftyAlgebra& alg, int degree);

int cohomology_dim(const LInftyAlgebra& alg, int degree);
// Exact homotopy operators in the given degree. Throws CohomologyError when H^i != 0.
HomotopyPair homotopy_operators(const LInftyAlgebra& alg, int degree);

// ℓ'_k(x_1..x_k) = φ ℓ_k(φ^{-1}x_1, .., φ^{-1}x_k) for degree-preserving invertible φ
// given per degree (identity where absent).
LInftyAlgebra change_basis(const LInftyAlgebra& alg, const std::map<int, RationalMatrix>& phi);

// Rows of a bracket's output restricted to V_0 inputs: max over output coordinates of
// Σ |coefficient| · (number of orderings of the key). An upper bound on ‖ℓ_k‖ in the
// max norm.
Rational bracket_norm_bound(const Bracket& b);

void require_flat(const LInftyAlgebra& alg, const char* what);
void require_degree_zero(const Element& u, const char* what);

}  // namespace ldeform
