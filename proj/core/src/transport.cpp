#include "ldeform/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ldeform {

DeformationPath DeformationPath::orbit(const FloatCochain& mu0, const FloatMatrix& A) {
  if (mu0.arity() != 2 || A.rows() != mu0.n() || A.cols() != mu0.n())
    throw std::invalid_argument("orbit path needs a 2-cochain and a matching square matrix");
  DeformationPath p;
  p.kind_ = Kind::Orbit;
  p.mu0_ = mu0;
  p.A_ = A;
  return p;
}

DeformationPath DeformationPath::samples(std::vector<double> times, std::vector<FloatCochain> structures) {
  if (times.size() != structures.size() || times.size() < 2)
    throw std::invalid_argument("sampled path needs at least two times with one structure each");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("sample times must increase strictly");
  for (const auto& s : structures)
    if (s.arity() != 2 || s.n() != structures[0].n()) throw std::invalid_argument("samples must be 2-cochains of one dimension");
  DeformationPath p;
  p.kind_ = Kind::Samples;
  const std::size_t m = times.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == m ? m - 1 : i + 1;
    FloatCochain s = structures[hi] - structures[lo];
    s *= 1.0 / (times[hi] - times[lo]);
    p.slopes_.push_back(std::move(s));
  }
  p.times_ = std::move(times);
  p.values_ = std::move(structures);
  return p;
}

int DeformationPath::n() const { return kind_ == Kind::Orbit ? mu0_.n() : values_.front().n(); }
double DeformationPath::t_min() const { return kind_ == Kind::Orbit ? -1e300 : times_.front(); }
double DeformationPath::t_max() const { return kind_ == Kind::Orbit ? 1e300 : times_.back(); }

FloatCochain DeformationPath::at(double t) const {
  if (kind_ == Kind::Orbit) {
    FloatMatrix tA = A_;
    tA *= t;
    return gl_action(mu0_, expm(tA));
  }
  if (t < times_.front() || t > times_.back()) throw std::out_of_range("time outside the sampled path");
  const std::size_t i = std::min<std::size_t>(
      static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin()), times_.size() - 1);
  const std::size_t a = i - 1;
  const double dt = times_[i] - times_[a];
  const double s = (t - times_[a]) / dt;
  const double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
  const double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
  return h00 * values_[a] + (h10 * dt) * slopes_[a] + h01 * values_[i] + (h11 * dt) * slopes_[i];
}

FloatCochain DeformationPath::derivative(double t) const {
  if (kind_ == Kind::Orbit) {
    // d/dt μ₀·exp(tA) = d_e m_{μ_t}(A)
    const auto mt = at(t);
    return FloatCochain(mt.n(), 2, action_derivative(mt).apply(endomorphism_cochain(A_).values()));
  }
  if (t < times_.front() || t > times_.back()) throw std::out_of_range("time outside the sampled path");
  const std::size_t i = std::min<std::size_t>(
      static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin()), times_.size() - 1);
  const std::size_t a = i - 1;
  const double dt = times_[i] - times_[a];
  const double s = (t - times_[a]) / dt;
  const double d00 = (6 * s * s - 6 * s) / dt, d10 = 3 * s * s - 4 * s + 1;
  const double d01 = (-6 * s * s + 6 * s) / dt, d11 = 3 * s * s - 2 * s;
  return d00 * values_[a] + d10 * slopes_[a] + d01 * values_[i] + d11 * slopes_[i];
}

namespace {

double defect(const FloatCochain& mu0, const FloatCochain& mut, const FloatMatrix& P) {
  const auto moved = gl_action(mut, P);
  double worst = 0;
  for (std::size_t i = 0; i < moved.values().size(); ++i)
    worst = std::max(worst, std::abs(mu0.values()[i] - moved.values()[i]));
  return worst;
}

}  // namespace

TransportResult parallel_transport(const DeformationPath& path, const LieStructure& mu0, const HomotopyPair& h,
                                   double t_end, int steps) {
  if (steps < 1) throw std::invalid_argument("transport needs at least one step");
  if (path.n() != mu0.n()) throw std::invalid_argument("path and μ₀ live on different dimensions");
  const int n = mu0.n();
  const auto mu0f = to_float(mu0);

  // ∂_t P = −X(t) P with X(t) = H₁(μ_t)(∂_t μ_t) ∈ gl(n).
  auto generator = [&](double t) {
    const auto mt = path.at(t);
    PerturbedHomotopies ph;
    try {
      ph = perturbed_homotopies(h, mu0, mt);
    } catch (const std::domain_error& e) {
      throw std::domain_error(std::string(e.what()) + " at t = " + std::to_string(t));
    }
    const auto x = ph.h1.apply(path.derivative(t).values());
    FloatMatrix X = cochain_endomorphism(FloatCochain(n, 1, x));
    X *= -1.0;
    return X;
  };

  TransportResult r;
  FloatMatrix P = FloatMatrix::identity(n);
  const double dt = t_end / steps;
  r.times.push_back(0);
  r.P.push_back(P);
  r.defect.push_back(defect(mu0f, path.at(0), P));
  for (int s = 0; s < steps; ++s) {
    const double t = s * dt;
    const FloatMatrix k1 = generator(t) * P;
    const FloatMatrix k2 = generator(t + dt / 2) * (P + (dt / 2) * k1);
    const FloatMatrix k3 = generator(t + dt / 2) * (P + (dt / 2) * k2);
    const FloatMatrix k4 = generator(t + dt) * (P + dt * k3);
    P += (dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double tn = (s + 1) * dt;
    r.times.push_back(tn);
    r.P.push_back(P);
    r.defect.push_back(defect(mu0f, path.at(tn), P));
  }
  return r;
}

}  // namespace ldeform
