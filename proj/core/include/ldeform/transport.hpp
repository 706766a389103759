#pragma once

#include <vector>

#include "ldeform/lie.hpp"

namespace ldeform {

// t ↦ μ_t ∈ C²(g), either μ₀·exp(tA) in closed form or piecewise-cubic through samples.
class DeformationPath {
 public:
  static DeformationPath orbit(const FloatCochain& mu0, const FloatMatrix& A);
  // Cubic Hermite interpolation with finite-difference slopes; times strictly increasing.
  static DeformationPath samples(std::vector<double> times, std::vector<FloatCochain> structures);

  FloatCochain at(double t) const;
  FloatCochain derivative(double t) const;
  int n() const;
  double t_min() const;
  double t_max() const;

 private:
  enum class Kind { Orbit, Samples } kind_ = Kind::Orbit;
  FloatCochain mu0_;
  FloatMatrix A_;
  std::vector<double> times_;
  std::vector<FloatCochain> values_;
  std::vector<FloatCochain> slopes_;
};

struct TransportResult {
  std::vector<double> times;
  std::vector<FloatMatrix> P;
  std::vector<double> defect;  // max |μ₀ − μ_t·P(t)|
};

// Integrates ∂_t P = −H₁(μ_t)(∂_t μ_t) ∘ P from P(0) = Id with classical RK4 on
// [0, t_end]. h are the degree-0 homotopy operators at μ₀ = path.at(0).
TransportResult parallel_transport(const DeformationPath& path, const LieStructure& mu0, const HomotopyPair& h,
                                   double t_end, int steps);

}  // namespace ldeform
