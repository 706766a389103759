#include "ldeform/lie.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ldeform {

namespace {

int binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

template <class S>
std::vector<S> unit(int n, int i) {
  std::vector<S> e(static_cast<std::size_t>(n), S(0));
  e[static_cast<std::size_t>(i)] = S(1);
  return e;
}

template <class S>
void add_scaled(std::vector<S>& acc, const S& s, const std::vector<S>& x) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s * x[i];
}

template <class S>
std::optional<Matrix<S>> invert(const Matrix<S>& m) {
  return inverse(m);
}

}  // namespace

std::vector<std::vector<int>> increasing_tuples(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int p = k - 1;
    while (p >= 0 && cur[static_cast<std::size_t>(p)] == n - k + p) --p;
    if (p < 0) break;
    ++cur[static_cast<std::size_t>(p)];
    for (int q = p + 1; q < k; ++q) cur[static_cast<std::size_t>(q)] = cur[static_cast<std::size_t>(q) - 1] + 1;
  }
  return out;
}

int tuple_rank(int n, std::span<const int> tuple) {
  const int k = static_cast<int>(tuple.size());
  int rank = 0;
  int prev = -1;
  for (int p = 0; p < k; ++p) {
    for (int v = prev + 1; v < tuple[static_cast<std::size_t>(p)]; ++v) rank += binom(n - 1 - v, k - 1 - p);
    prev = tuple[static_cast<std::size_t>(p)];
  }
  return rank;
}

int cochain_dim(int n, int k) { return binom(n, k) * n; }

// ---- Cochain ----------------------------------------------------------------

template <class S>
Cochain<S>::Cochain(int n, int arity) : n_(n), arity_(arity), values_(static_cast<std::size_t>(cochain_dim(n, arity)), S(0)) {
  if (n < 0 || arity < 0) throw std::invalid_argument("cochain dimensions must be nonnegative");
}

template <class S>
Cochain<S>::Cochain(int n, int arity, std::vector<S> values) : n_(n), arity_(arity), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != cochain_dim(n, arity))
    throw std::invalid_argument("cochain of arity " + std::to_string(arity) + " on dimension " + std::to_string(n) +
                                " needs " + std::to_string(cochain_dim(n, arity)) + " values");
}

template <class S>
S& Cochain<S>::at(std::span<const int> increasing, int c) {
  return values_[static_cast<std::size_t>(tuple_rank(n_, increasing) * n_ + c)];
}

template <class S>
std::vector<S> Cochain<S>::on_basis(std::vector<int> idx) const {
  std::vector<S> out(static_cast<std::size_t>(n_), S(0));
  if (static_cast<int>(idx.size()) != arity_) throw std::invalid_argument("wrong number of cochain arguments");
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return out;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  const std::size_t base = static_cast<std::size_t>(tuple_rank(n_, idx) * n_);
  for (int c = 0; c < n_; ++c) out[static_cast<std::size_t>(c)] = values_[base + static_cast<std::size_t>(c)];
  if (sign < 0)
    for (auto& x : out) x = -x;
  return out;
}

template <class S>
std::vector<S> Cochain<S>::eval(std::span<const std::vector<S>> args) const {
  if (static_cast<int>(args.size()) != arity_) throw std::invalid_argument("wrong number of cochain arguments");
  std::vector<S> out(static_cast<std::size_t>(n_), S(0));
  std::vector<int> idx;
  auto rec = [&](auto&& self, std::size_t a, const S& coeff) -> void {
    if (a == args.size()) {
      add_scaled(out, coeff, on_basis(idx));
      return;
    }
    for (int j = 0; j < n_; ++j) {
      const S& x = args[a][static_cast<std::size_t>(j)];
      if (x == S(0)) continue;
      if (std::find(idx.begin(), idx.end(), j) != idx.end()) continue;
      idx.push_back(j);
      self(self, a + 1, coeff * x);
      idx.pop_back();
    }
  };
  rec(rec, 0, S(1));
  return out;
}

template <class S>
Cochain<S>& Cochain<S>::operator+=(const Cochain& o) {
  if (o.n_ != n_ || o.arity_ != arity_) throw std::invalid_argument("cochain shapes differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

template <class S>
Cochain<S>& Cochain<S>::operator-=(const Cochain& o) {
  if (o.n_ != n_ || o.arity_ != arity_) throw std::invalid_argument("cochain shapes differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

template <class S>
Cochain<S>& Cochain<S>::operator*=(const S& s) {
  for (auto& v : values_) v *= s;
  return *this;
}

template class Cochain<Rational>;
template class Cochain<double>;

LieStructure lie_from_constants(int n, std::span<const StructureConstant> constants) {
  if (n < 1) throw std::invalid_argument("Lie algebra dimension must be positive");
  LieStructure mu(n, 2);
  for (const auto& c : constants) {
    if (c.i < 0 || c.j < 0 || c.k < 0 || c.i >= n || c.j >= n || c.k >= n)
      throw std::invalid_argument("structure constant index out of range");
    if (c.i >= c.j) throw std::invalid_argument("structure constants need i < j");
    const int t[] = {c.i, c.j};
    mu.at(t, c.k) += c.coeff;
  }
  return mu;
}

std::vector<StructureConstant> constants_of(const LieStructure& mu) {
  std::vector<StructureConstant> out;
  const int n = mu.n();
  for (const auto& t : increasing_tuples(n, 2)) {
    auto v = mu.on_basis(t);
    for (int k = 0; k < n; ++k)
      if (sgn(v[static_cast<std::size_t>(k)]) != 0) out.push_back({t[0], t[1], k, v[static_cast<std::size_t>(k)]});
  }
  return out;
}

FloatCochain to_float(const Cochain<Rational>& c) {
  std::vector<double> v;
  v.reserve(c.values().size());
  for (const auto& x : c.values()) v.push_back(to_double(x));
  return FloatCochain(c.n(), c.arity(), std::move(v));
}

// ---- Jacobiator and the group action ----------------------------------------

namespace {

// J(μ,ν)(x,y,z) = μ(ν(x,y),z) + μ(ν(y,z),x) + μ(ν(z,x),y)
template <class S>
Cochain<S> cyclic_compose(const Cochain<S>& mu, const Cochain<S>& nu) {
  const int n = mu.n();
  Cochain<S> out(n, 3);
  for (const auto& t : increasing_tuples(n, 3)) {
    std::vector<S> acc(static_cast<std::size_t>(n), S(0));
    const int cyc[3][3] = {{t[0], t[1], t[2]}, {t[1], t[2], t[0]}, {t[2], t[0], t[1]}};
    for (const auto& c : cyc) {
      const std::vector<S> args[] = {nu.on_basis({c[0], c[1]}), unit<S>(n, c[2])};
      add_scaled(acc, S(1), mu.eval(args));
    }
    for (int k = 0; k < n; ++k) out.at(t, k) = acc[static_cast<std::size_t>(k)];
  }
  return out;
}

}  // namespace

template <class S>
Cochain<S> jacobiator_lie(const Cochain<S>& mu) {
  if (mu.arity() != 2) throw std::invalid_argument("Jacobiator needs a 2-cochain");
  return cyclic_compose(mu, mu);
}

template <class S>
Cochain<S> gl_action(const Cochain<S>& eta, const Matrix<S>& A) {
  const int n = eta.n();
  if (A.rows() != n || A.cols() != n) throw std::invalid_argument("matrix size does not match the Lie algebra");
  auto Ainv = invert(A);
  if (!Ainv) throw std::invalid_argument("singular matrix in the group action");
  Cochain<S> out(n, eta.arity());
  for (const auto& t : increasing_tuples(n, eta.arity())) {
    std::vector<std::vector<S>> args;
    for (int i : t) args.push_back(A.column(i));
    auto v = Ainv->apply(eta.eval(args));
    for (int k = 0; k < n; ++k) out.at(t, k) = v[static_cast<std::size_t>(k)];
  }
  return out;
}

template <class S>
Cochain<S> endomorphism_cochain(const Matrix<S>& A) {
  const int n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("endomorphism must be square");
  Cochain<S> c(n, 1);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) c.values()[static_cast<std::size_t>(b * n + a)] = A(a, b);
  return c;
}

template <class S>
Matrix<S> cochain_endomorphism(const Cochain<S>& c) {
  if (c.arity() != 1) throw std::invalid_argument("endomorphism needs a 1-cochain");
  const int n = c.n();
  Matrix<S> A(n, n);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) A(a, b) = c.values()[static_cast<std::size_t>(b * n + a)];
  return A;
}

// ---- Nijenhuis-Richardson ---------------------------------------------------

template <class S>
Cochain<S> nr_compose(const Cochain<S>& P, const Cochain<S>& Q) {
  if (P.n() != Q.n()) throw std::invalid_argument("cochains on different dimensions");
  if (P.arity() < 1 || Q.arity() < 1) throw std::invalid_argument("composition needs cochains of arity >= 1");
  const int n = P.n();
  const int qa = Q.arity();
  const int m = P.arity() + qa - 1;
  Cochain<S> out(n, m);
  if (m > n) return out;
  const auto shuffles = enumerate_unshuffles(qa, m - qa);
  const std::vector<int> odd(static_cast<std::size_t>(m), 1);
  for (const auto& t : increasing_tuples(n, m)) {
    std::vector<S> acc(static_cast<std::size_t>(n), S(0));
    for (const auto& sigma : shuffles) {
      std::vector<int> inner;
      for (int a = 0; a < qa; ++a) inner.push_back(t[static_cast<std::size_t>(sigma[static_cast<std::size_t>(a)])]);
      std::vector<std::vector<S>> args{Q.on_basis(inner)};
      for (int a = qa; a < m; ++a) args.push_back(unit<S>(n, t[static_cast<std::size_t>(sigma[static_cast<std::size_t>(a)])]));
      add_scaled(acc, S(koszul_sign(sigma, odd)), P.eval(args));
    }
    for (int k = 0; k < n; ++k) out.at(t, k) = acc[static_cast<std::size_t>(k)];
  }
  return out;
}

template <class S>
Cochain<S> nijenhuis_richardson(const Cochain<S>& P, const Cochain<S>& Q) {
  const int p = P.arity() - 1;
  const int q = Q.arity() - 1;
  Cochain<S> out = nr_compose(P, Q);
  const Cochain<S> back = nr_compose(Q, P);
  if ((p * q) % 2 == 0) out -= back;
  else out += back;
  return out;
}

// ---- the three differentials ------------------------------------------------

namespace {

template <class S>
Cochain<S> basis_cochain(int n, int arity, int index) {
  Cochain<S> c(n, arity);
  c.values()[static_cast<std::size_t>(index)] = S(1);
  return c;
}

template <class S>
Matrix<S> matrix_of(int rows, int cols, auto&& column) {
  Matrix<S> m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    const Cochain<S> c = column(j);
    for (int i = 0; i < rows; ++i) m(i, j) = c.values()[static_cast<std::size_t>(i)];
  }
  return m;
}

}  // namespace

template <class S>
Matrix<S> action_derivative(const Cochain<S>& mu) {
  const int n = mu.n();
  return matrix_of<S>(cochain_dim(n, 2), cochain_dim(n, 1), [&](int col) {
    const Matrix<S> A = cochain_endomorphism(basis_cochain<S>(n, 1, col));
    Cochain<S> out(n, 2);
    for (const auto& t : increasing_tuples(n, 2)) {
      const auto x = unit<S>(n, t[0]);
      const auto y = unit<S>(n, t[1]);
      const std::vector<S> a1[] = {A.apply(x), y};
      const std::vector<S> a2[] = {x, A.apply(y)};
      auto v = mu.eval(a1);
      add_scaled(v, S(1), mu.eval(a2));
      add_scaled(v, S(-1), A.apply(mu.on_basis(t)));
      for (int k = 0; k < n; ++k) out.at(t, k) = v[static_cast<std::size_t>(k)];
    }
    return out;
  });
}

template <class S>
Matrix<S> jac_derivative(const Cochain<S>& mu) {
  const int n = mu.n();
  return matrix_of<S>(cochain_dim(n, 3), cochain_dim(n, 2), [&](int col) {
    const auto v = basis_cochain<S>(n, 2, col);
    return cyclic_compose(mu, v) + cyclic_compose(v, mu);
  });
}

template <class S>
Matrix<S> ce_stabilizer(const Cochain<S>& mu) {
  const int n = mu.n();
  return matrix_of<S>(cochain_dim(n, 4), cochain_dim(n, 3), [&](int col) {
    const auto eta = basis_cochain<S>(n, 3, col);
    Cochain<S> out(n, 4);
    for (const auto& t : increasing_tuples(n, 4)) {
      std::vector<S> acc(static_cast<std::size_t>(n), S(0));
      for (int i = 0; i < 4; ++i) {
        std::vector<int> rest;
        for (int a = 0; a < 4; ++a)
          if (a != i) rest.push_back(t[static_cast<std::size_t>(a)]);
        const std::vector<S> args[] = {unit<S>(n, t[static_cast<std::size_t>(i)]), eta.on_basis(rest)};
        add_scaled(acc, S(i % 2 == 0 ? 1 : -1), mu.eval(args));
      }
      for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
          std::vector<std::vector<S>> args{mu.on_basis({t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(j)]})};
          for (int a = 0; a < 4; ++a)
            if (a != i && a != j) args.push_back(unit<S>(n, t[static_cast<std::size_t>(a)]));
          add_scaled(acc, S((i + j) % 2 == 0 ? 1 : -1), eta.eval(args));
        }
      }
      for (int k = 0; k < n; ++k) out.at(t, k) = acc[static_cast<std::size_t>(k)];
    }
    return out;
  });
}

#define LDEFORM_INSTANTIATE(S)                                                   \
  template Cochain<S> jacobiator_lie(const Cochain<S>&);                         \
  template Cochain<S> gl_action(const Cochain<S>&, const Matrix<S>&);            \
  template Cochain<S> endomorphism_cochain(const Matrix<S>&);                    \
  template Matrix<S> cochain_endomorphism(const Cochain<S>&);                    \
  template Cochain<S> nr_compose(const Cochain<S>&, const Cochain<S>&);          \
  template Cochain<S> nijenhuis_richardson(const Cochain<S>&, const Cochain<S>&); \
  template Matrix<S> action_derivative(const Cochain<S>&);                       \
  template Matrix<S> jac_derivative(const Cochain<S>&);                          \
  template Matrix<S> ce_stabilizer(const Cochain<S>&);

LDEFORM_INSTANTIATE(Rational)
LDEFORM_INSTANTIATE(double)
#undef LDEFORM_INSTANTIATE

// ---- the deformation algebra ------------------------------------------------

SpacePtr deformation_space(int n) {
  if (n < 1) throw std::invalid_argument("Lie algebra dimension must be positive");
  return make_space({{-1, cochain_dim(n, 1)}, {0, cochain_dim(n, 2)}, {1, cochain_dim(n, 3)}, {2, cochain_dim(n, 4)}});
}

Element cochain_element(const SpacePtr& space, const LieStructure& c) {
  return Element::in_degree(space, c.arity() - 2, c.values());
}

LieStructure element_cochain(int n, const Element& x, int degree) {
  return LieStructure(n, degree + 2, x.component(degree));
}

namespace {

int lie_dim(const GradedSpace& space) {
  const int n2 = space.dim(-1);
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n2))));
  if (n * n != n2) throw std::logic_error("not a deformation space");
  return n;
}

// ℓ₂(x, y) = (−1)^{|x|} [x, y] for basis vectors x ≤ y with the given degree filter.
Bracket nr_bracket(const SpacePtr& space, bool only_v0) {
  const int n = lie_dim(*space);
  Bracket b(space, 2);
  const int d = space->total_dim();
  for (int g = 0; g < d; ++g) {
    const int dg = space->degree_of(g);
    for (int h = g; h < d; ++h) {
      const int dh = space->degree_of(h);
      if (only_v0 && (dg != 0 || dh != 0)) continue;
      if (g == h && dg % 2 != 0) continue;
      if (dg + dh + 1 > 2) continue;
      const auto x = basis_cochain<Rational>(n, dg + 2, g - space->offset(dg));
      const auto y = basis_cochain<Rational>(n, dh + 2, h - space->offset(dh));
      auto v = nijenhuis_richardson(x, y);
      if (dg % 2 != 0) v *= Rational(-1);
      b.add_canonical({g, h}, cochain_element(space, v).nonzeros());
    }
  }
  return b;
}

}  // namespace

Bracket jac_second(const LieStructure& mu0) { return nr_bracket(deformation_space(mu0.n()), true); }

LInftyAlgebra build_deformation_linfty(const LieStructure& mu0) {
  if (mu0.arity() != 2) throw std::invalid_argument("μ₀ must be a 2-cochain");
  if (!(jacobiator_lie(mu0) == LieStructure(mu0.n(), 3)))
    throw std::invalid_argument("μ₀ is not a Lie structure: Jacobiator nonzero");
  const int n = mu0.n();
  auto space = deformation_space(n);
  Bracket l1(space, 1);
  const RationalMatrix blocks[] = {action_derivative(mu0), jac_derivative(mu0), ce_stabilizer(mu0)};
  for (int d = -1; d <= 1; ++d) {
    const auto& m = blocks[d + 1];
    const int in_off = space->offset(d);
    const int out_off = space->offset(d + 1);
    for (int j = 0; j < m.cols(); ++j) {
      SparseVector col;
      for (int i = 0; i < m.rows(); ++i)
        if (sgn(m(i, j)) != 0) col.emplace_back(out_off + i, m(i, j));
      l1.add_canonical({in_off + j}, col);
    }
  }
  std::vector<Bracket> brackets;
  brackets.emplace_back(space, 0);
  brackets.push_back(std::move(l1));
  brackets.push_back(nr_bracket(space, false));
  return LInftyAlgebra(space, std::move(brackets), 3);
}

RigidityResult rigidity_check(const LieStructure& mu0) {
  const auto alg = build_deformation_linfty(mu0);
  RigidityResult r;
  r.cohomology_dim = cohomology_dim(alg, 0);
  r.rank_action = rank(differential_block(alg, -1));
  r.kernel_jac = alg.space()->dim(0) - rank(differential_block(alg, 0));
  if (r.cohomology_dim == 0) r.homotopy = homotopy_operators(alg, 0);
  return r;
}

FloatCochain orbit_parametrization(const LieStructure& mu0, const RationalMatrix& h1, std::span<const double> v) {
  const int n = mu0.n();
  if (h1.rows() != cochain_dim(n, 1) || h1.cols() != cochain_dim(n, 2) || static_cast<int>(v.size()) != h1.cols())
    throw std::invalid_argument("orbit parametrization: operator or vector has the wrong size");
  const auto a = to_float(h1).apply(v);
  const auto A = cochain_endomorphism(FloatCochain(n, 1, a));
  return gl_action(to_float(mu0), expm(A));
}

PerturbedHomotopies perturbed_homotopies(const HomotopyPair& h, const LieStructure& mu0, const FloatCochain& mu) {
  if (h.degree != 0) throw std::invalid_argument("perturbed homotopies need degree-0 operators");
  const auto mu0f = to_float(mu0);
  const FloatMatrix dm = action_derivative(mu);
  const FloatMatrix dj = jac_derivative(mu);
  const FloatMatrix alpha = dm - action_derivative(mu0f);
  const FloatMatrix beta = dj - jac_derivative(mu0f);
  const FloatMatrix h1 = to_float(h.h_low);
  const FloatMatrix h2 = to_float(h.h_high);
  const FloatMatrix t1 = alpha * h1;
  const FloatMatrix t2 = beta * h2;
  PerturbedHomotopies out;
  out.neumann1 = inf_norm(t1);
  out.neumann2 = inf_norm(t2);
  if (out.neumann1 >= 1 || out.neumann2 >= 1) throw std::domain_error("outside perturbation neighbourhood");
  auto i1 = inverse(FloatMatrix::identity(t1.rows()) + t1);
  auto i2 = inverse(FloatMatrix::identity(t2.rows()) + t2);
  if (!i1 || !i2) throw std::domain_error("outside perturbation neighbourhood");
  out.h1 = h1 * *i1;
  out.h2 = h2 * *i2;
  out.residual = max_abs(dm * out.h1 + out.h2 * dj - FloatMatrix::identity(dm.rows()));
  return out;
}

}  // namespace ldeform
