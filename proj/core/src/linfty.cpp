#include "ldeform/linfty.hpp"

#include <algorithm>
#include <string>

#include "ldeform/combinatorics.hpp"

namespace ldeform {

LInftyAlgebra::LInftyAlgebra(SpacePtr space, std::vector<Bracket> brackets, int strictness)
    : space_(std::move(space)), strictness_(strictness), none_(space_, 0) {
  if (strictness < 0) throw std::invalid_argument("strictness must be nonnegative");
  if (static_cast<int>(brackets.size()) > strictness)
    throw std::invalid_argument("more brackets than the strictness bound allows");
  for (std::size_t k = 0; k < brackets.size(); ++k) {
    auto& b = brackets[k];
    if (!b.space()) b = Bracket(space_, static_cast<int>(k));
    if (b.arity() != static_cast<int>(k))
      throw std::invalid_argument("bracket " + std::to_string(k) + " has arity " + std::to_string(b.arity()));
    if (b.space() != space_ && !(*b.space() == *space_))
      throw std::invalid_argument("bracket " + std::to_string(k) + " lives in another space");
  }
  while (static_cast<int>(brackets.size()) < strictness)
    brackets.emplace_back(space_, static_cast<int>(brackets.size()));
  brackets_ = std::move(brackets);
  curvature_ = strictness_ > 0 ? eval_bracket(brackets_[0], {}) : Element(space_);
}

const Bracket& LInftyAlgebra::bracket(int k) const {
  if (k >= 0 && k < strictness_) return brackets_[static_cast<std::size_t>(k)];
  return none_;
}

CohomologyError::CohomologyError(int degree, int dimension)
    : std::domain_error("H^" + std::to_string(degree) + " != 0 (dimension " + std::to_string(dimension) + ")"),
      degree_(degree),
      dimension_(dimension) {}

void require_flat(const LInftyAlgebra& alg, const char* what) {
  if (!alg.is_flat()) throw std::invalid_argument(std::string(what) + " requires a flat algebra (ℓ0 = 0)");
}

void require_degree_zero(const Element& u, const char* what) {
  if (auto d = u.degree(); u.is_zero() || (d && *d == 0)) return;
  throw std::invalid_argument(std::string(what) + " requires a homogeneous element of degree 0");
}

// ---------------------------------------------------------------------------

std::vector<std::vector<int>> enumerate_unshuffles(int p, int q) {
  if (p < 0 || q < 0) throw std::invalid_argument("unshuffle sizes must be nonnegative");
  const int n = p + q;
  std::vector<std::vector<int>> out;
  std::vector<bool> mask(static_cast<std::size_t>(n), false);
  std::fill(mask.begin(), mask.begin() + p, true);
  // Lexicographic over the first block by walking masks in decreasing order.
  do {
    std::vector<int> sigma;
    sigma.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      if (mask[static_cast<std::size_t>(j)]) sigma.push_back(j);
    for (int j = 0; j < n; ++j)
      if (!mask[static_cast<std::size_t>(j)]) sigma.push_back(j);
    out.push_back(std::move(sigma));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

namespace {

std::vector<int> degrees_of(std::span<const Element> args) {
  std::vector<int> degs;
  for (const auto& a : args) {
    auto d = a.degree();
    if (!a.is_zero() && !d) throw std::invalid_argument("Jacobiator arguments must be homogeneous");
    degs.push_back(d.value_or(0));
  }
  return degs;
}

}  // namespace

Element jacobiator(const LInftyAlgebra& alg, int n, std::span<const Element> args) {
  if (n < 0 || static_cast<int>(args.size()) != n)
    throw std::invalid_argument("jacobiator of order " + std::to_string(n) + " needs exactly n arguments");
  const auto degs = degrees_of(args);
  Element out(alg.space());
  for (int i = 0; i <= n; ++i) {
    const int j = n - i + 1;
    const auto& inner = alg.bracket(i);
    const auto& outer = alg.bracket(j);
    if (inner.empty() || outer.empty()) continue;
    for (const auto& sigma : enumerate_unshuffles(i, n - i)) {
      const int sign = koszul_sign(sigma, degs);
      std::vector<Element> in_args, out_args;
      for (int a = 0; a < i; ++a) in_args.push_back(args[static_cast<std::size_t>(sigma[static_cast<std::size_t>(a)])]);
      out_args.push_back(eval_bracket(inner, in_args));
      for (int a = i; a < n; ++a) out_args.push_back(args[static_cast<std::size_t>(sigma[static_cast<std::size_t>(a)])]);
      Element term = eval_bracket(outer, out_args);
      if (sign < 0) out -= term;
      else out += term;
    }
  }
  return out;
}

namespace {

// Jac_n on basis vectors, working with sparse values throughout.
SparseVector jacobiator_basis(const LInftyAlgebra& alg, const std::vector<int>& tuple) {
  const int n = static_cast<int>(tuple.size());
  const auto& space = *alg.space();
  std::vector<int> degs;
  for (int g : tuple) degs.push_back(space.degree_of(g));
  SparseVector out;
  for (int i = 0; i <= n; ++i) {
    const auto& inner = alg.bracket(i);
    const auto& outer = alg.bracket(n - i + 1);
    if (inner.empty() || outer.empty()) continue;
    for (const auto& sigma : enumerate_unshuffles(i, n - i)) {
      std::vector<int> in_key;
      for (int a = 0; a < i; ++a) in_key.push_back(tuple[static_cast<std::size_t>(sigma[static_cast<std::size_t>(a)])]);
      SparseVector inner_val = inner.on_basis(in_key);
      if (inner_val.empty()) continue;
      const int sign = koszul_sign(sigma, degs);
      for (const auto& [g, c] : inner_val) {
        std::vector<int> out_key{g};
        for (int a = i; a < n; ++a) out_key.push_back(tuple[static_cast<std::size_t>(sigma[static_cast<std::size_t>(a)])]);
        SparseVector v = outer.on_basis(out_key);
        if (!v.empty()) axpy(out, Rational(sign) * c, v);
      }
    }
  }
  return out;
}

// Visits every nondecreasing tuple of global indices of length n, skipping odd
// repeats, whose degree sum lies in [lo, hi].
template <class F>
void for_each_canonical_tuple(const GradedSpace& space, int n, int lo, int hi, F&& f) {
  const int d = space.total_dim();
  std::vector<int> cur;
  const int min_deg = space.min_degree();
  const int max_deg = space.max_degree();
  auto rec = [&](auto&& self, int start, int remaining, int deg_sum) -> void {
    if (remaining == 0) {
      if (deg_sum >= lo && deg_sum <= hi) f(cur);
      return;
    }
    // Prune with the achievable range of the remaining degree sum.
    if (deg_sum + remaining * min_deg > hi || deg_sum + remaining * max_deg < lo) return;
    for (int g = start; g < d; ++g) {
      const int deg = space.degree_of(g);
      if (!cur.empty() && cur.back() == g && deg % 2 != 0) continue;
      cur.push_back(g);
      self(self, g, remaining - 1, deg_sum + deg);
      cur.pop_back();
    }
  };
  if (n == 0) {
    if (0 >= lo && 0 <= hi) f(cur);
    return;
  }
  if (d == 0) return;
  rec(rec, 0, n, 0);
}

}  // namespace

JacobiReport verify_linfty(const LInftyAlgebra& alg) {
  JacobiReport report;
  const auto& space = *alg.space();
  const int N = alg.strictness();
  for (int n = 0; n <= std::max(0, 2 * N - 1); ++n) {
    Rational worst = 0;
    bool any_pair = false;
    for (int i = 0; i <= n; ++i)
      if (!alg.bracket(i).empty() && !alg.bracket(n - i + 1).empty()) any_pair = true;
    if (any_pair && space.total_dim() > 0) {
      // Jac_n has degree +2; only tuples landing inside the support can be nonzero.
      const int lo = space.min_degree() - 2;
      const int hi = space.max_degree() - 2;
      for_each_canonical_tuple(space, n, lo, hi, [&](const std::vector<int>& tuple) {
        for (const auto& [g, c] : jacobiator_basis(alg, tuple)) {
          Rational a = abs(c);
          if (a > worst) worst = a;
        }
      });
    }
    report.max_violation[n] = worst;
    if (sgn(worst) != 0 && !report.first_failure) report.first_failure = n;
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

// Calls f(sub, rest, weight) for every sub-multiset `sub` of the degree-0 part of
// key (as index positions), with weight Π u_s / Π mult(s)!.
template <class F>
void for_each_u_split(const GradedSpace& space, const Bracket::Key& key, const Element& u, F&& f) {
  // Group the degree-0 slots of the key by value.
  std::vector<std::pair<int, int>> groups;  // (global, multiplicity)
  for (int g : key) {
    if (space.degree_of(g) != 0) continue;
    if (!groups.empty() && groups.back().first == g) ++groups.back().second;
    else groups.emplace_back(g, 1);
  }
  std::vector<int> take(groups.size(), 0);
  auto rec = [&](auto&& self, std::size_t gi, const Rational& weight) -> void {
    if (gi == groups.size()) {
      Bracket::Key rest;
      std::size_t pos = 0;
      std::vector<int> left(take);
      for (int g : key) {
        if (space.degree_of(g) == 0) {
          while (groups[pos].first != g) ++pos;
          if (left[pos] > 0) {
            --left[pos];
            continue;
          }
        }
        rest.push_back(g);
      }
      f(rest, weight);
      return;
    }
    const auto& [g, mult] = groups[gi];
    const Rational& ug = u[g];
    Rational w = weight;
    take[gi] = 0;
    self(self, gi + 1, w);
    if (sgn(ug) == 0) return;
    for (int t = 1; t <= mult; ++t) {
      w = w * ug / t;
      take[gi] = t;
      self(self, gi + 1, w);
    }
    take[gi] = 0;
  };
  rec(rec, 0, Rational(1));
}

}  // namespace

LInftyAlgebra twist(const LInftyAlgebra& alg, const Element& u) {
  require_degree_zero(u, "twist");
  const auto& space = alg.space();
  const int N = alg.strictness();
  std::vector<Bracket> out;
  for (int p = 0; p < N; ++p) out.emplace_back(space, p);
  for (int m = 0; m < N; ++m) {
    for (const auto& [key, value] : alg.bracket(m).entries()) {
      for_each_u_split(*space, key, u, [&](const Bracket::Key& rest, const Rational& w) {
        out[rest.size()].add_canonical(rest, value, w);
      });
    }
  }
  return LInftyAlgebra(space, std::move(out), N);
}

Element mc_eval(const LInftyAlgebra& alg, const Element& u) {
  require_degree_zero(u, "mc_eval");
  const auto& space = *alg.space();
  Element out(alg.space());
  for (int m = 0; m < alg.strictness(); ++m) {
    for (const auto& [key, value] : alg.bracket(m).entries()) {
      Rational w = 1;
      int run = 0;
      bool all_zero_degree = true;
      for (std::size_t j = 0; j < key.size(); ++j) {
        if (space.degree_of(key[j]) != 0) {
          all_zero_degree = false;
          break;
        }
        run = (j > 0 && key[j] == key[j - 1]) ? run + 1 : 1;
        w = w * u[key[j]] / run;
        if (sgn(w) == 0) break;
      }
      if (!all_zero_degree || sgn(w) == 0) continue;
      for (const auto& [g, c] : value) out.add_to(g, w * c);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

RationalMatrix differential_block(const LInftyAlgebra& alg, int degree) {
  const auto& space = *alg.space();
  const int cols = space.dim(degree);
  const int rows = space.dim(degree + 1);
  RationalMatrix m(rows, cols);
  if (rows == 0 || cols == 0) return m;
  const int col_off = space.offset(degree);
  const int row_off = space.offset(degree + 1);
  for (int j = 0; j < cols; ++j) {
    for (const auto& [g, c] : alg.bracket(1).on_basis({col_off + j})) m(g - row_off, j) = c;
  }
  return m;
}

std::map<int, RationalMatrix> differential_blocks(const LInftyAlgebra& alg) {
  require_flat(alg, "differential_blocks");
  std::map<int, RationalMatrix> out;
  for (int d : alg.space()->degrees()) {
    out.emplace(d - 1, differential_block(alg, d - 1));
    out.emplace(d, differential_block(alg, d));
  }
  return out;
}

int cohomology_dim(const LInftyAlgebra& alg, int degree) {
  require_flat(alg, "cohomology_dim");
  const int n = alg.space()->dim(degree);
  if (n == 0) return 0;
  const int kernel = n - rank(differential_block(alg, degree));
  return kernel - rank(differential_block(alg, degree - 1));
}

namespace {

// Picks columns of [basis | Id] that span, keeping all of `basis`.
RationalMatrix extend_to_basis(const RationalMatrix& basis, int n, std::vector<int>* added) {
  RationalMatrix aug(n, basis.cols() + n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < basis.cols(); ++j) aug(i, j) = basis(i, j);
    aug(i, basis.cols() + i) = 1;
  }
  auto cols = independent_columns(aug);
  RationalMatrix full(n, n);
  int c = 0;
  for (int col : cols) {
    for (int i = 0; i < n; ++i) full(i, c) = aug(i, col);
    if (col >= basis.cols() && added) added->push_back(col - basis.cols());
    ++c;
  }
  return full;
}

}  // namespace

HomotopyPair homotopy_operators(const LInftyAlgebra& alg, int degree) {
  require_flat(alg, "homotopy_operators");
  if (int h = cohomology_dim(alg, degree); h != 0) throw CohomologyError(degree, h);
  const auto& space = *alg.space();
  const int n_lo = space.dim(degree - 1);
  const int n = space.dim(degree);
  const int n_hi = space.dim(degree + 1);
  const RationalMatrix d0 = differential_block(alg, degree - 1);  // n x n_lo
  const RationalMatrix d1 = differential_block(alg, degree);      // n_hi x n

  HomotopyPair pair;
  pair.degree = degree;
  pair.h_low = RationalMatrix(n_lo, n);
  pair.h_high = RationalMatrix(n, n_hi);

  // Basis of V_i: image vectors δ e_p for pivot columns p, then standard vectors W.
  const auto pivots = independent_columns(d0);
  const int r = static_cast<int>(pivots.size());
  RationalMatrix image(n, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < n; ++i) image(i, j) = d0(i, pivots[static_cast<std::size_t>(j)]);
  std::vector<int> complement;
  const RationalMatrix basis = extend_to_basis(image, n, &complement);
  const auto basis_inv = inverse(basis);
  if (!basis_inv) throw std::logic_error("homotopy construction: basis not invertible");
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < n; ++i) pair.h_low(pivots[static_cast<std::size_t>(j)], i) = (*basis_inv)(j, i);

  // δ is injective on W; invert it there and send a complement of δ(W) to zero.
  const int w = static_cast<int>(complement.size());
  RationalMatrix dw(n_hi, w);
  for (int j = 0; j < w; ++j)
    for (int i = 0; i < n_hi; ++i) dw(i, j) = d1(i, complement[static_cast<std::size_t>(j)]);
  const RationalMatrix target = extend_to_basis(dw, n_hi, nullptr);
  const auto target_inv = inverse(target);
  if (!target_inv) throw std::logic_error("homotopy construction: δ not injective on the complement");
  for (int j = 0; j < w; ++j)
    for (int i = 0; i < n_hi; ++i) pair.h_high(complement[static_cast<std::size_t>(j)], i) = (*target_inv)(j, i);

  pair.residual = d0 * pair.h_low + pair.h_high * d1 - RationalMatrix::identity(n);
  return pair;
}

// ---------------------------------------------------------------------------

LInftyAlgebra change_basis(const LInftyAlgebra& alg, const std::map<int, RationalMatrix>& phi) {
  const auto& space = alg.space();
  std::map<int, RationalMatrix> inv;
  for (const auto& [d, m] : phi) {
    if (m.rows() != space->dim(d) || m.cols() != space->dim(d))
      throw std::invalid_argument("change of basis in degree " + std::to_string(d) + " has wrong size");
    auto mi = inverse(m);
    if (!mi) throw std::invalid_argument("change of basis in degree " + std::to_string(d) + " is singular");
    inv.emplace(d, std::move(*mi));
  }
  auto apply = [&](const std::map<int, RationalMatrix>& maps, const Element& x) {
    Element y(space);
    for (int d : space->degrees()) {
      auto comp = x.component(d);
      auto it = maps.find(d);
      auto img = it == maps.end() ? comp : it->second.apply(comp);
      const int off = space->offset(d);
      for (std::size_t i = 0; i < img.size(); ++i) y.add_to(off + static_cast<int>(i), img[i]);
    }
    return y;
  };
  std::vector<Bracket> out;
  for (int k = 0; k < alg.strictness(); ++k) {
    Bracket b(space, k);
    if (!alg.bracket(k).empty()) {
      for_each_canonical_tuple(*space, k, space->min_degree() - 1, space->max_degree() - 1,
                               [&](const std::vector<int>& tuple) {
                                 std::vector<Element> args;
                                 for (int g : tuple) args.push_back(apply(inv, Element::basis(space, space->slot(g))));
                                 Element v = apply(phi, eval_bracket(alg.bracket(k), args));
                                 b.add_canonical(tuple, v.nonzeros());
                               });
    }
    out.push_back(std::move(b));
  }
  return LInftyAlgebra(space, std::move(out), alg.strictness());
}

Rational bracket_norm_bound(const Bracket& b) {
  const auto& space = *b.space();
  std::map<int, Rational> rows;
  for (const auto& [key, value] : b.entries()) {
    if (!std::all_of(key.begin(), key.end(), [&](int g) { return space.degree_of(g) == 0; })) continue;
    Composition multiplicities;
    for (std::size_t j = 0; j < key.size(); ++j) {
      if (j > 0 && key[j] == key[j - 1]) ++multiplicities.parts.back();
      else multiplicities.parts.push_back(1);
    }
    // Orderings of the key: k! / Π mult!.
    BigInt orderings = factorial(static_cast<unsigned>(key.size()));
    for (int m : multiplicities.parts) orderings /= factorial(static_cast<unsigned>(m));
    for (const auto& [g, c] : value) rows[g] += abs(c) * Rational(orderings);
  }
  Rational best = 0;
  for (const auto& [g, s] : rows)
    if (s > best) best = s;
  return best;
}

}  // namespace ldeform
