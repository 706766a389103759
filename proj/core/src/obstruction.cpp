#include "ldeform/obstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ldeform/combinatorics.hpp"

namespace ldeform {

namespace {

Rational inv_factorial(int n) { return Rational(1, factorial(static_cast<unsigned>(n))); }

void require_base_point(const LInftyAlgebra& alg, const Element& u0) {
  require_degree_zero(u0, "base point");
  if (!mc_eval(alg, u0).is_zero()) throw std::invalid_argument("base point not a solution");
}

Element apply_block(const RationalMatrix& m, const Element& x, int from_degree, int to_degree) {
  const auto& space = x.space();
  auto img = m.apply(x.component(from_degree));
  return Element::in_degree(space, to_degree, img);
}

// Calls f(i, j, r, weight) for every term of the k-th derivative formula:
// 1 <= i <= k, 0 <= j <= k - i, r a composition of k - j into i parts,
// weight = k! / (r_1!..r_i! j!) / i!.
template <class F>
void for_each_derivative_term(int k, F&& f) {
  const BigInt kf = factorial(static_cast<unsigned>(k));
  for (int i = 1; i <= k; ++i) {
    for (int j = 0; j <= k - i; ++j) {
      for (const auto& r : compositions(k - j, i)) {
        BigInt denom = factorial(static_cast<unsigned>(j)) * factorial(static_cast<unsigned>(i));
        for (int part : r.parts) denom *= factorial(static_cast<unsigned>(part));
        Rational w(kf, denom);
        w.canonicalize();
        f(i, j, r, w);
      }
    }
  }
}

}  // namespace

bool ConvergenceCertificate::ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.ok(); });
}

Element obstruction_twisted(const LInftyAlgebra& twisted, std::span<const Element> prefix, CompositionMode mode) {
  if (prefix.empty()) throw std::invalid_argument("obstruction needs at least u₀");
  const int k = static_cast<int>(prefix.size()) - 1;
  Element out(twisted.space());
  for (int i = 2; i <= k + 1 && i < twisted.strictness(); ++i) {
    const auto& b = twisted.bracket(i);
    if (b.empty()) continue;
    const Rational inv_i = inv_factorial(i);
    const auto parts = mode == CompositionMode::All ? compositions(k + 1, i) : nondecreasing_compositions(k + 1, i);
    for (const auto& r : parts) {
      Rational w = Rational(multinomial(k + 1, r)) * inv_i;
      if (mode == CompositionMode::Representatives) w *= Rational(orbit_size(r));
      std::vector<Element> args;
      bool zero = false;
      for (int p : r.parts) {
        const auto& x = prefix[static_cast<std::size_t>(p)];
        if (x.is_zero()) zero = true;
        args.push_back(x);
      }
      if (zero) continue;
      out += w * eval_bracket(b, args);
    }
  }
  return out;
}

Element obstruction(const LInftyAlgebra& alg, std::span<const Element> prefix, CompositionMode mode) {
  if (prefix.empty()) throw std::invalid_argument("obstruction needs at least u₀");
  require_base_point(alg, prefix[0]);
  return obstruction_twisted(twist(alg, prefix[0]), prefix, mode);
}

std::vector<Element> taylor_mc(const LInftyAlgebra& alg, const FormalSeries& series, int K, TaylorRoute route,
                               CompositionMode mode) {
  if (K < 0) throw std::invalid_argument("negative order");
  if (series.order() < K)
    throw std::invalid_argument("series of order " + std::to_string(series.order()) + " cannot give order " +
                                std::to_string(K));
  for (const auto& u : series.coeffs) require_degree_zero(u, "taylor_mc");
  std::vector<Element> out;
  if (route == TaylorRoute::Substitution) {
    auto u = PolyPath::from_derivatives(alg.space(), std::span(series.coeffs).first(static_cast<std::size_t>(K) + 1));
    auto m = mc_poly(alg, u, K);
    for (int k = 0; k <= K; ++k) out.push_back(m.derivative_at_zero(k));
    return out;
  }
  const auto tw = twist(alg, series[0]);
  out.push_back(tw.curvature());
  for (int k = 1; k <= K; ++k) {
    Element m = eval_bracket(tw.bracket(1), std::span(&series.coeffs[static_cast<std::size_t>(k)], 1));
    m += obstruction_twisted(tw, std::span(series.coeffs).first(static_cast<std::size_t>(k)), mode);
    out.push_back(std::move(m));
  }
  return out;
}

DeformationOrderError::DeformationOrderError(int order)
    : std::invalid_argument("prefix is not a k-deformation: derivative of MC nonzero at order " +
                            std::to_string(order)),
      order_(order) {}

ObstructionReport verify_cocycle(const LInftyAlgebra& alg, std::span<const Element> prefix) {
  if (prefix.empty()) throw std::invalid_argument("verify_cocycle needs at least u₀");
  FormalSeries s{std::vector<Element>(prefix.begin(), prefix.end())};
  const int k = s.order();
  const auto m = taylor_mc(alg, s, k);
  for (int j = 0; j <= k; ++j)
    if (!m[static_cast<std::size_t>(j)].is_zero()) throw DeformationOrderError(j);
  const auto tw = twist(alg, s[0]);
  ObstructionReport rep;
  rep.k = k;
  rep.value = obstruction_twisted(tw, prefix);
  rep.is_cocycle = eval_bracket(tw.bracket(1), std::span(&rep.value, 1)).is_zero();
  const auto d0 = differential_block(tw, 0);
  auto rhs = rep.value.component(1);
  rep.class_zero = solve(d0, rhs).has_value();
  return rep;
}

FormalSeries extend_formal(const LInftyAlgebra& alg, const HomotopyPair& h, const Element& u1, int K,
                           const std::optional<Element>& u0, CompositionMode mode) {
  if (K < 1) throw std::invalid_argument("extend_formal needs order K >= 1");
  if (h.degree != 1) throw std::invalid_argument("extend_formal needs homotopy operators in degree 1");
  const auto& space = alg.space();
  Element base = u0 ? *u0 : Element(space);
  require_base_point(alg, base);
  require_degree_zero(u1, "extend_formal");
  const auto tw = twist(alg, base);
  if (!(differential_block(tw, 0) * h.h_low + h.h_high * differential_block(tw, 1) ==
        RationalMatrix::identity(space->dim(1))))
    throw std::invalid_argument("homotopy operators do not match ℓ₁ at the base point");
  if (!eval_bracket(tw.bracket(1), std::span(&u1, 1)).is_zero())
    throw std::invalid_argument("u₁ is not a cocycle");
  FormalSeries s{{base, u1}};
  for (int k = 1; k < K; ++k) {
    Element obs = obstruction_twisted(tw, s.coeffs, mode);
    s.coeffs.push_back(-apply_block(h.h_low, obs, 1, 0));
  }
  return s;
}

double alpha_bound(const LInftyAlgebra& alg, Norm) {
  Rational a = 0;
  for (int i = 1; i < alg.strictness(); ++i) a += bracket_norm_bound(alg.bracket(i)) * inv_factorial(i);
  return to_double(a);
}

double h1_norm(const HomotopyPair& h) { return inf_norm(h.h_low); }

double element_norm(const Element& x) {
  Rational best = 0;
  for (const auto& c : x.coords())
    if (abs(c) > best) best = abs(c);
  return to_double(best);
}

double element_norm(std::span<const double> x) {
  double best = 0;
  for (double c : x) best = std::max(best, std::abs(c));
  return best;
}

ConvergenceCertificate coefficient_bounds(const LInftyAlgebra& alg, const HomotopyPair& h, double u1_norm, int K) {
  if (!(u1_norm >= 0)) throw std::invalid_argument("degenerate norm of u₁");
  ConvergenceCertificate c;
  c.h1_norm = h1_norm(h);
  c.alpha = alpha_bound(alg);
  c.u1_norm = u1_norm;
  c.radius = convergence_radius(c.h1_norm, c.alpha);
  const double ha = c.h1_norm * c.alpha;
  for (int k = 1; k <= K; ++k) {
    BoundRow row;
    row.k = k;
    row.bound = std::pow(u1_norm, k) * std::pow(ha, k - 1) * to_double(Rational(super_catalan(k)));
    c.rows.push_back(row);
  }
  return c;
}

ConvergenceCertificate certify(const LInftyAlgebra& alg, const HomotopyPair& h, const FormalSeries& series) {
  if (series.order() < 1) throw std::invalid_argument("certificate needs u₁");
  auto c = coefficient_bounds(alg, h, element_norm(series[1]), series.order());
  for (auto& row : c.rows) {
    Rational best = 0;
    for (const auto& x : series[row.k].coords())
      if (abs(x) > best) best = abs(x);
    row.computed = to_double(best * inv_factorial(row.k));
  }
  return c;
}

std::vector<double> sum_series(const FormalSeries& series, double t) {
  if (series.coeffs.empty()) return {};
  std::vector<double> out(series[0].coords().size(), 0.0);
  double tk = 1;
  for (int k = 0; k <= series.order(); ++k) {
    const Rational f = inv_factorial(k);
    const auto& coords = series[k].coords();
    for (std::size_t g = 0; g < coords.size(); ++g)
      if (sgn(coords[g]) != 0) out[g] += to_double(coords[g] * f) * tk;
    tk *= t;
  }
  return out;
}

std::vector<double> mc_eval_float(const LInftyAlgebra& alg, std::span<const double> u) {
  const auto& space = *alg.space();
  if (static_cast<int>(u.size()) != space.total_dim()) throw std::invalid_argument("coordinate vector has wrong size");
  for (int g = 0; g < space.total_dim(); ++g)
    if (space.degree_of(g) != 0 && u[static_cast<std::size_t>(g)] != 0.0)
      throw std::invalid_argument("mc_eval_float requires a degree-0 element");
  std::vector<double> out(u.size(), 0.0);
  for (int m = 0; m < alg.strictness(); ++m) {
    for (const auto& [key, value] : alg.bracket(m).entries()) {
      double w = 1;
      int run = 0;
      bool skip = false;
      for (std::size_t j = 0; j < key.size(); ++j) {
        if (space.degree_of(key[j]) != 0) {
          skip = true;
          break;
        }
        run = (j > 0 && key[j] == key[j - 1]) ? run + 1 : 1;
        w *= u[static_cast<std::size_t>(key[j])] / run;
      }
      if (skip || w == 0.0) continue;
      for (const auto& [g, c] : value) out[static_cast<std::size_t>(g)] += w * to_double(c);
    }
  }
  return out;
}

PsiResult psi(const LInftyAlgebra& alg, const HomotopyPair& h, const Element& v, const PsiOptions& opts) {
  if (opts.max_order < 1) throw std::invalid_argument("max order must be at least 1");
  PsiResult r;
  r.series = extend_formal(alg, h, v, opts.max_order, std::nullopt, opts.mode);
  const int K = r.series.order();
  const double at = std::abs(opts.t);

  int last = 0;
  for (int k = 0; k <= K; ++k)
    if (!r.series[k].is_zero()) last = k;
  r.terminated = K >= std::max(1, alg.strictness() - 1) * std::max(last, 1);

  for (int k = 0; k <= K; ++k) r.term_norms.push_back(element_norm(r.series[k]) * to_double(inv_factorial(k)) * std::pow(at, k));
  for (int k = 1; k < K; ++k) {
    const double a = r.term_norms[static_cast<std::size_t>(k)];
    const double b = r.term_norms[static_cast<std::size_t>(k) + 1];
    if (a > 0 && b > 0) r.max_decay_ratio = std::max(r.max_decay_ratio, b / a);
  }

  const double ha = h1_norm(h) * alpha_bound(alg);
  if (ha > 0) {
    r.certificate = certify(alg, h, r.series);
    r.within_radius = at * r.certificate.u1_norm < r.certificate.radius;
  } else {
    r.certificate.radius = std::numeric_limits<double>::infinity();
    r.within_radius = true;
  }
  if (r.terminated) {
    r.tail_estimate = 0;
  } else if (r.within_radius && ha > 0) {
    const double q = 6 * r.certificate.u1_norm * ha * at;
    r.tail_estimate = std::pow(q, K + 1) / (1 - q) / ha;
  } else {
    r.tail_estimate = std::numeric_limits<double>::infinity();
  }

  // Residuals of the partial sums, used to spot divergence. A terminated series is
  // a polynomial in t, summed exactly at the (dyadic) time.
  FormalSeries partial;
  double smallest = std::numeric_limits<double>::infinity();
  const Rational tq(opts.t);
  Element exact_sum(alg.space());
  Rational tk = 1;
  for (int k = 0; k <= K; ++k) {
    double res = 0;
    if (r.terminated) {
      exact_sum += Rational(tk * inv_factorial(k)) * r.series[k];
      tk *= tq;
      res = element_norm(mc_eval(alg, exact_sum));
    } else {
      partial.coeffs.push_back(r.series[k]);
      res = element_norm(mc_eval_float(alg, sum_series(partial, opts.t)));
    }
    r.certificate.residuals.push_back(res);
    smallest = std::min(smallest, res);
  }
  if (r.terminated) {
    r.value.clear();
    for (const auto& c : exact_sum.coords()) r.value.push_back(to_double(c));
  } else {
    r.value = sum_series(r.series, opts.t);
  }
  r.residual = r.certificate.residuals.back();
  if (!std::isfinite(r.residual) || (!r.terminated && r.residual > 1e-6 && r.residual > 10 * smallest))
    throw DivergenceError("series diverges: residual grows to " + std::to_string(r.residual) + " by order " +
                          std::to_string(K));
  return r;
}

PathDerivativeSides path_derivative_sides(const LInftyAlgebra& alg, const PolyPath& u, const PolyPath& v, int k) {
  if (k < 0) throw std::invalid_argument("negative derivative order");
  const int budget = std::max(u.degree(), 0) * std::max(alg.strictness() - 1, 0) + std::max(v.degree(), 0);
  if (budget > kPolyDegreeBudget)
    throw std::invalid_argument("polynomial degree budget exceeded (" + std::to_string(budget) + ")");
  PathDerivativeSides s;
  const PolyPath vv[] = {v};
  s.lhs = twisted_bracket_poly(alg, u, vv).derivative(k);
  const PolyPath dv[] = {v.derivative(k)};
  s.rhs = twisted_bracket_poly(alg, u, dv);
  for_each_derivative_term(k, [&](int, int j, const Composition& r, const Rational& w) {
    std::vector<PolyPath> args;
    for (int p : r.parts) args.push_back(u.derivative(p));
    args.push_back(v.derivative(j));
    s.rhs += w * twisted_bracket_poly(alg, u, args);
  });
  return s;
}

bool path_derivative_check(const LInftyAlgebra& alg, const PolyPath& u, const PolyPath& v, int k) {
  return path_derivative_sides(alg, u, v, k).equal();
}

Element lemma_dMC2_value(const LInftyAlgebra& alg, const FormalSeries& series, int k) {
  const auto M = taylor_mc(alg, series, k);
  const auto tw = twist(alg, series[0]);
  Element out = eval_bracket(tw.bracket(1), std::span(&M[static_cast<std::size_t>(k)], 1));
  for_each_derivative_term(k, [&](int i, int j, const Composition& r, const Rational& w) {
    const auto& b = tw.bracket(i + 1);
    if (b.empty()) return;
    std::vector<Element> args;
    for (int p : r.parts) args.push_back(series[p]);
    args.push_back(M[static_cast<std::size_t>(j)]);
    out += w * eval_bracket(b, args);
  });
  return out;
}

bool lemma_dMC2_check(const LInftyAlgebra& alg, const FormalSeries& series, int k) {
  return lemma_dMC2_value(alg, series, k).is_zero();
}

}  // namespace ldeform
