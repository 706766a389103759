#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "instances.hpp"
#include "ldeform/graded.hpp"
#include "ldeform/matrix.hpp"
#include "ldeform/rational.hpp"

using namespace ldeform;
namespace lt = ldeform::testing;

TEST(Rational, ParsesExactForms) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_EQ(parse_rational(" -0.05 "), Rational(-1, 20));
  EXPECT_EQ(parse_rational(".5"), Rational(1, 2));
  EXPECT_EQ(to_string(Rational(-3, 2)), "-3/2");
  EXPECT_EQ(to_string(parse_rational("4/2")), "2");
}

TEST(Rational, RejectsMalformed) {
  for (const char* bad : {"", "1/0", "abc", "1.2.3", "1e5", "--1", "1/-2", "."})
    EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
}

TEST(Rational, DoubleConversionRoundsCorrectly) {
  EXPECT_EQ(to_double(Rational(1, 20)), 0.05);
  EXPECT_EQ(to_double(Rational(1, 3)), 1.0 / 3.0);
  EXPECT_EQ(factorial(10), BigInt(3628800));
}

TEST(GradedSpace, GlobalIndexingIsLexicographic) {
  auto sp = make_space({{-1, 2}, {0, 3}, {2, 1}});
  EXPECT_EQ(sp->total_dim(), 6);
  EXPECT_EQ(sp->global_index({-1, 1}), 1);
  EXPECT_EQ(sp->global_index({0, 0}), 2);
  EXPECT_EQ(sp->global_index({2, 0}), 5);
  EXPECT_EQ(sp->slot(4), (Slot{0, 2}));
  EXPECT_EQ(sp->dim(1), 0);
  EXPECT_EQ(sp->min_degree(), -1);
  EXPECT_EQ(sp->max_degree(), 2);
  EXPECT_THROW(sp->global_index({0, 3}), std::out_of_range);
  EXPECT_THROW(sp->global_index({1, 0}), std::out_of_range);
  EXPECT_THROW(make_space({{0, -1}}), std::invalid_argument);
}

TEST(Element, ArithmeticAndDegree) {
  auto sp = make_space({{0, 2}, {1, 1}});
  auto x = Element::basis(sp, {0, 0}, 2) + Element::basis(sp, {0, 1}, -1);
  EXPECT_EQ(x.degree(), 0);
  EXPECT_TRUE(x.is_homogeneous());
  auto y = x + Element::basis(sp, {1, 0});
  EXPECT_FALSE(y.is_homogeneous());
  EXPECT_FALSE(y.degree().has_value());
  EXPECT_TRUE((x - x).is_zero());
  EXPECT_EQ(x.component(0), (std::vector<Rational>{2, -1}));
  EXPECT_EQ(Rational(3) * x, x + x + x);
  auto other = make_space({{0, 3}});
  EXPECT_THROW(x + Element::zero(other), std::invalid_argument);
}

TEST(Koszul, SpecExamples) {
  std::vector<int> id{0, 1, 2}, d3{1, 1, 2};
  EXPECT_EQ(koszul_sign(id, d3), 1);
  std::vector<int> swap{1, 0}, odd2{1, 1};
  EXPECT_EQ(koszul_sign(swap, odd2), -1);
  std::vector<int> perm{2, 0, 1};
  EXPECT_EQ(koszul_sign(perm, d3), 1);
  std::vector<int> evens{0, 2};
  EXPECT_EQ(koszul_sign(swap, evens), 1);
}

TEST(Koszul, RejectsBadInput) {
  std::vector<int> p{0, 1}, d{1};
  EXPECT_THROW(koszul_sign(p, d), std::invalid_argument);
  std::vector<int> q{0, 0}, e{1, 1};
  EXPECT_THROW(koszul_sign(q, e), std::invalid_argument);
}

TEST(Koszul, MultiplicativeOnRandomDegrees) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> deg(-2, 3);
  for (int k = 1; k <= 6; ++k) {
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<int> d(static_cast<std::size_t>(k));
      for (auto& x : d) x = deg(rng);
      std::vector<int> sigma(d.size()), tau(d.size());
      std::iota(sigma.begin(), sigma.end(), 0);
      std::iota(tau.begin(), tau.end(), 0);
      std::shuffle(sigma.begin(), sigma.end(), rng);
      std::shuffle(tau.begin(), tau.end(), rng);
      std::vector<int> tau_d(d.size()), composite(d.size());
      for (std::size_t i = 0; i < d.size(); ++i) {
        tau_d[i] = d[static_cast<std::size_t>(tau[i])];
        composite[i] = tau[static_cast<std::size_t>(sigma[i])];
      }
      EXPECT_EQ(koszul_sign(composite, d), koszul_sign(sigma, tau_d) * koszul_sign(tau, d));
    }
  }
}

TEST(Canonicalize, Examples) {
  auto sp = make_space({{0, 2}, {1, 2}});
  std::vector<Slot> sorted{{0, 0}, {0, 1}, {1, 0}};
  auto c = canonicalize(*sp, sorted);
  EXPECT_EQ(c.slots, sorted);
  EXPECT_EQ(c.sign, 1);
  EXPECT_FALSE(c.annihilated);

  std::vector<Slot> mixed{{1, 0}, {0, 1}};
  c = canonicalize(*sp, mixed);
  EXPECT_EQ(c.slots, (std::vector<Slot>{{0, 1}, {1, 0}}));
  EXPECT_EQ(c.sign, 1);

  std::vector<Slot> odds{{1, 1}, {1, 0}};
  c = canonicalize(*sp, odds);
  EXPECT_EQ(c.sign, -1);

  std::vector<Slot> square{{1, 0}, {1, 0}};
  EXPECT_TRUE(canonicalize(*sp, square).annihilated);
  std::vector<Slot> even_square{{0, 1}, {0, 1}};
  EXPECT_FALSE(canonicalize(*sp, even_square).annihilated);

  std::vector<Slot> bad{{2, 0}};
  EXPECT_THROW(canonicalize(*sp, bad), std::out_of_range);
}

TEST(Canonicalize, IdempotentOnAllTriples) {
  auto sp = make_space({{-1, 1}, {0, 1}, {1, 2}});
  const int d = sp->total_dim();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        std::vector<Slot> in{sp->slot(a), sp->slot(b), sp->slot(c)};
        auto once = canonicalize(*sp, in);
        auto twice = canonicalize(*sp, once.slots);
        EXPECT_EQ(twice.slots, once.slots);
        EXPECT_EQ(twice.sign, 1);
        EXPECT_TRUE(std::is_sorted(once.slots.begin(), once.slots.end()));
      }
}

TEST(Bracket, LookupAndValidation) {
  auto sp = make_space({{0, 2}, {1, 1}});
  auto f = Element::basis(sp, {1, 0});
  Bracket b(sp, 2);
  std::vector<Slot> ee{{0, 0}, {0, 0}};
  b.add(ee, f);
  const auto e = Element::basis(sp, {0, 0});
  std::vector<Element> args{e, e};
  EXPECT_EQ(eval_bracket(b, args), f);
  std::vector<Element> with_zero{e, Element::zero(sp)};
  EXPECT_TRUE(eval_bracket(b, with_zero).is_zero());

  std::vector<Slot> wrong_arity{{0, 0}};
  EXPECT_THROW(b.add(wrong_arity, f), std::invalid_argument);
  EXPECT_THROW(b.add(ee, e), std::invalid_argument);
  std::vector<Element> one{e};
  EXPECT_THROW(eval_bracket(b, one), std::invalid_argument);
  auto other = make_space({{0, 3}});
  std::vector<Element> foreign{e, Element::basis(other, {0, 0})};
  EXPECT_THROW(eval_bracket(b, foreign), std::invalid_argument);

  auto odd = make_space({{1, 1}, {3, 1}});
  Bracket c(odd, 2);
  std::vector<Slot> sq{{1, 0}, {1, 0}};
  EXPECT_THROW(c.add(sq, Element::basis(odd, {3, 0})), std::invalid_argument);
}

TEST(Bracket, EvenArgumentsCommute) {
  auto sp = make_space({{0, 2}, {1, 1}});
  Bracket b(sp, 2);
  std::vector<Slot> e12{{0, 0}, {0, 1}};
  b.add(e12, Element::basis(sp, {1, 0}, Rational(5, 3)));
  std::vector<Element> ab{Element::basis(sp, {0, 0}), Element::basis(sp, {0, 1})};
  std::vector<Element> ba{ab[1], ab[0]};
  EXPECT_EQ(eval_bracket(b, ab), eval_bracket(b, ba));
  EXPECT_EQ(eval_bracket(b, ab), Element::basis(sp, {1, 0}, Rational(5, 3)));
}

TEST(Bracket, PermutedArgumentsPickUpKoszulSign) {
  std::mt19937 rng(5);
  auto alg = lt::random_graded(rng, 1, 2, 1, 4, 0.7);
  const auto& sp = alg.space();
  const int d = sp->total_dim();
  for (int arity = 2; arity <= 3; ++arity) {
    const auto& b = alg.bracket(arity);
    std::vector<int> idx(static_cast<std::size_t>(arity), 0);
    while (true) {
      std::vector<Element> args;
      std::vector<int> degs;
      for (int g : idx) {
        args.push_back(Element::basis(sp, sp->slot(g)));
        degs.push_back(sp->degree_of(g));
      }
      const auto base = eval_bracket(b, args);
      std::vector<int> perm(idx.size());
      std::iota(perm.begin(), perm.end(), 0);
      do {
        std::vector<Element> permuted;
        for (int p : perm) permuted.push_back(args[static_cast<std::size_t>(p)]);
        EXPECT_EQ(eval_bracket(b, permuted), Rational(koszul_sign(perm, degs)) * base);
      } while (std::next_permutation(perm.begin(), perm.end()));
      int pos = 0;
      while (pos < arity && ++idx[static_cast<std::size_t>(pos)] == d) idx[static_cast<std::size_t>(pos++)] = 0;
      if (pos == arity) break;
    }
  }
}

TEST(Matrix, IdentityAndZero) {
  for (int n : {1, 3, 5}) {
    auto id = RationalMatrix::identity(n);
    EXPECT_EQ(rank(id), n);
    EXPECT_TRUE(nullspace_basis(id).empty());
    RationalMatrix z(n, n);
    EXPECT_EQ(rank(z), 0);
    EXPECT_EQ(static_cast<int>(nullspace_basis(z).size()), n);
  }
}

TEST(Matrix, RankTwoExample) {
  RationalMatrix m(3, 3);
  const int v[3][3] = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = v[r][c];
  EXPECT_EQ(rank(m), 2);
  auto ns = nullspace_basis(m);
  ASSERT_EQ(ns.size(), 1u);
  EXPECT_EQ(ns[0], (std::vector<Rational>{1, -2, 1}));
  std::vector<Rational> rhs{6, 15, 24};
  auto x = solve(m, rhs);
  ASSERT_TRUE(x);
  EXPECT_EQ(m.apply(*x), rhs);
  std::vector<Rational> bad{1, 0, 0};
  EXPECT_FALSE(solve(m, bad));
  EXPECT_FALSE(inverse(m));
  std::vector<Rational> wrong{1, 2};
  EXPECT_THROW(solve(m, wrong), std::invalid_argument);
}

TEST(Matrix, RankNullityOnRandomMatrices) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> dim(1, 8);
  std::bernoulli_distribution sparse(0.4);
  for (int trial = 0; trial < 60; ++trial) {
    RationalMatrix m(dim(rng), dim(rng));
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        if (!sparse(rng)) m(r, c) = lt::random_rational(rng);
    auto ns = nullspace_basis(m);
    EXPECT_EQ(rank(m) + static_cast<int>(ns.size()), m.cols());
    for (const auto& v : ns)
      for (const auto& y : m.apply(v)) EXPECT_EQ(y, 0);
    if (m.rows() == m.cols()) {
      auto inv = inverse(m);
      if (inv) {
        EXPECT_EQ(m * *inv, RationalMatrix::identity(m.rows()));
      }
    }
  }
}

TEST(Matrix, FloatInverseAndExponential) {
  FloatMatrix a(2, 2);
  a(0, 0) = 2;
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(1, 1) = 1;
  auto inv = inverse(a);
  ASSERT_TRUE(inv);
  EXPECT_LT(max_abs(a * *inv - FloatMatrix::identity(2)), 1e-14);
  FloatMatrix singular(2, 2);
  singular(0, 0) = 1;
  singular(0, 1) = 2;
  singular(1, 0) = 2;
  singular(1, 1) = 4;
  EXPECT_FALSE(inverse(singular));

  EXPECT_EQ(expm(FloatMatrix(3, 3)), FloatMatrix::identity(3));
  FloatMatrix d(2, 2);
  d(0, 0) = 1;
  d(1, 1) = -2;
  auto e = expm(d);
  EXPECT_NEAR(e(0, 0), std::exp(1.0), 1e-14);
  EXPECT_NEAR(e(1, 1), std::exp(-2.0), 1e-15);
  FloatMatrix nil(2, 2);
  nil(0, 1) = 3;
  auto en = expm(nil);
  EXPECT_DOUBLE_EQ(en(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(inf_norm(a), 3.0);
}
