#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ldeform/linfty.hpp"
#include "ldeform/polynomial.hpp"

namespace ldeform {

// Σ_k u_k tᵏ/k!; coeffs[k] is the k-th derivative at t = 0.
struct FormalSeries {
  std::vector<Element> coeffs;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  const Element& operator[](int k) const { return coeffs[static_cast<std::size_t>(k)]; }
};

struct ObstructionReport {
  int k = 0;
  Element value;
  bool is_cocycle = false;
  std::optional<bool> class_zero;
};

enum class CompositionMode {
  Representatives,  // nondecreasing compositions weighted by orbit size
  All,              // every composition
};

enum class TaylorRoute {
  Obstruction,
  Substitution,  // exact truncated-polynomial substitution
};

enum class Norm { Max };

struct BoundRow {
  int k = 0;
  double computed = 0;  // ‖u_k‖/k!
  double bound = 0;     // ‖u₁‖ᵏ (‖h₁‖α)^{k-1} C_k
  bool ok() const { return computed <= bound * (1 + 1e-12); }
};

struct ConvergenceCertificate {
  double h1_norm = 0;
  double alpha = 0;
  double radius = 0;
  double u1_norm = 0;
  std::vector<BoundRow> rows;
  std::vector<double> residuals;  // ‖MC(partial sum up to k)‖ per k
  bool ok() const;
};

struct PsiOptions {
  int max_order = 40;
  double t = 1.0;
  CompositionMode mode = CompositionMode::Representatives;
};

struct PsiResult {
  FormalSeries series;
  std::vector<double> value;      // Σ_{k≤K} u_k tᵏ/k!
  double residual = 0;            // ‖MC(value)‖
  std::vector<double> term_norms;  // ‖u_k‖ |t|ᵏ / k!
  double max_decay_ratio = 0;     // over consecutive nonzero terms, k ≥ 1
  double tail_estimate = 0;       // from the coefficient bound; +inf outside the radius
  bool terminated = false;        // every coefficient after the last nonzero one vanished
  bool within_radius = false;     // |t|·‖u₁‖ < radius
  ConvergenceCertificate certificate;
};

class DeformationOrderError : public std::invalid_argument {
 public:
  explicit DeformationOrderError(int order);
  int order() const { return order_; }

 private:
  int order_;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Obs^k for the prefix u₀..u_k. Throws when u₀ is not a Maurer-Cartan element.
Element obstruction(const LInftyAlgebra& alg, std::span<const Element> prefix,
                    CompositionMode mode = CompositionMode::Representatives);
// Same sum without the base-point check, over already twisted brackets ℓ^{u₀}.
Element obstruction_twisted(const LInftyAlgebra& twisted, std::span<const Element> prefix,
                            CompositionMode mode = CompositionMode::Representatives);

// ∂ᵏ MC(u_t) at t = 0 for k = 0..K.
std::vector<Element> taylor_mc(const LInftyAlgebra& alg, const FormalSeries& series, int K,
                               TaylorRoute route = TaylorRoute::Obstruction,
                               CompositionMode mode = CompositionMode::Representatives);

// Checks that the prefix u₀..u_k is a k-deformation, then evaluates Obs^k.
ObstructionReport verify_cocycle(const LInftyAlgebra& alg, std::span<const Element> prefix);

// u_{k+1} = −h(Obs^k) starting from u₀ (default 0) and u₁. h must be a degree-1
// homotopy pair for ℓ₁^{u₀}.
FormalSeries extend_formal(const LInftyAlgebra& alg, const HomotopyPair& h, const Element& u1, int K,
                           const std::optional<Element>& u0 = std::nullopt,
                           CompositionMode mode = CompositionMode::Representatives);

// Σ_{i≥1} ‖ℓ_i‖/i! with the row-sum bound on V₀ inputs.
double alpha_bound(const LInftyAlgebra& alg, Norm norm = Norm::Max);
double h1_norm(const HomotopyPair& h);
double element_norm(const Element& x);
double element_norm(std::span<const double> x);

ConvergenceCertificate coefficient_bounds(const LInftyAlgebra& alg, const HomotopyPair& h, double u1_norm, int K);
// Fills the computed column from an actual series.
ConvergenceCertificate certify(const LInftyAlgebra& alg, const HomotopyPair& h, const FormalSeries& series);

std::vector<double> sum_series(const FormalSeries& series, double t);
std::vector<double> mc_eval_float(const LInftyAlgebra& alg, std::span<const double> u);

PsiResult psi(const LInftyAlgebra& alg, const HomotopyPair& h, const Element& v, const PsiOptions& opts = {});

// Both sides of the k-th derivative formula for ℓ₁^{u_t}(v_t), as polynomials.
struct PathDerivativeSides {
  PolyPath lhs;
  PolyPath rhs;
  bool equal() const { return lhs == rhs; }
};
PathDerivativeSides path_derivative_sides(const LInftyAlgebra& alg, const PolyPath& u, const PolyPath& v, int k);
bool path_derivative_check(const LInftyAlgebra& alg, const PolyPath& u, const PolyPath& v, int k);

// The k-th derivative of ℓ₁^{u_t}(MC(u_t)) = 0 at t = 0, expanded through the
// series coefficients; returns the value of the expansion (zero when it holds).
Element lemma_dMC2_value(const LInftyAlgebra& alg, const FormalSeries& series, int k);
bool lemma_dMC2_check(const LInftyAlgebra& alg, const FormalSeries& series, int k);

}  // namespace ldeform
