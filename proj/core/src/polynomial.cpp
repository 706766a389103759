#include "ldeform/polynomial.hpp"

#include <stdexcept>
#include <string>

namespace ldeform {

PolyPath::PolyPath(SpacePtr space) : space_(std::move(space)) {}

PolyPath::PolyPath(SpacePtr space, std::vector<Element> coeffs) : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_)
    if (c.space() != space_ && !(*c.space() == *space_))
      throw std::invalid_argument("polynomial coefficient in another space");
  trim();
}

PolyPath PolyPath::from_derivatives(SpacePtr space, std::span<const Element> derivs) {
  std::vector<Element> c;
  for (std::size_t n = 0; n < derivs.size(); ++n)
    c.push_back(Rational(1, factorial(static_cast<unsigned>(n))) * derivs[n]);
  return PolyPath(std::move(space), std::move(c));
}

PolyPath PolyPath::constant(const Element& x) { return PolyPath(x.space(), {x}); }

int PolyPath::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

Element PolyPath::coeff(int n) const {
  if (n >= 0 && n < static_cast<int>(coeffs_.size())) return coeffs_[static_cast<std::size_t>(n)];
  return Element(space_);
}

Element PolyPath::derivative_at_zero(int n) const { return Rational(factorial(static_cast<unsigned>(n))) * coeff(n); }

PolyPath PolyPath::derivative(int times) const {
  if (times < 0) throw std::invalid_argument("negative derivative order");
  std::vector<Element> c;
  for (int n = times; n <= degree(); ++n) {
    BigInt falling = factorial(static_cast<unsigned>(n)) / factorial(static_cast<unsigned>(n - times));
    c.push_back(Rational(falling) * coeffs_[static_cast<std::size_t>(n)]);
  }
  return PolyPath(space_, std::move(c));
}

PolyPath PolyPath::truncated(int order) const {
  if (order < 0 || order >= degree()) return *this;
  return PolyPath(space_, std::vector<Element>(coeffs_.begin(), coeffs_.begin() + order + 1));
}

Element PolyPath::at(const Rational& t) const {
  Element out(space_);
  for (int n = degree(); n >= 0; --n) {
    out *= t;
    out += coeffs_[static_cast<std::size_t>(n)];
  }
  return out;
}

void PolyPath::add_term(int n, const Element& x) {
  if (n < 0) throw std::invalid_argument("negative power");
  if (x.is_zero()) return;
  while (static_cast<int>(coeffs_.size()) <= n) coeffs_.emplace_back(space_);
  coeffs_[static_cast<std::size_t>(n)] += x;
  trim();
}

PolyPath& PolyPath::operator+=(const PolyPath& o) {
  for (int n = 0; n <= o.degree(); ++n) add_term(n, o.coeffs_[static_cast<std::size_t>(n)]);
  return *this;
}

PolyPath& PolyPath::operator*=(const Rational& s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

bool operator==(const PolyPath& a, const PolyPath& b) { return a.coeffs_ == b.coeffs_; }

void PolyPath::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

PolyPath eval_bracket_poly(const Bracket& b, std::span<const PolyPath> args, int order) {
  if (static_cast<int>(args.size()) != b.arity())
    throw std::invalid_argument("bracket of arity " + std::to_string(b.arity()) + " given " +
                                std::to_string(args.size()) + " polynomial arguments");
  PolyPath out(b.space());
  if (b.empty()) return out;
  int total = 0;
  for (const auto& a : args) {
    if (a.degree() < 0) return out;
    total += a.degree();
  }
  const int cap = order < 0 ? total : std::min(order, total);
  if (cap > kPolyDegreeBudget)
    throw std::invalid_argument("polynomial degree budget exceeded (" + std::to_string(cap) + " > " +
                                std::to_string(kPolyDegreeBudget) + ")");
  std::vector<Element> picked;
  auto rec = [&](auto&& self, std::size_t a, int deg) -> void {
    if (a == args.size()) {
      out.add_term(deg, eval_bracket(b, picked));
      return;
    }
    for (int n = 0; n <= args[a].degree() && deg + n <= cap; ++n) {
      const Element c = args[a].coeff(n);
      if (c.is_zero()) continue;
      picked.push_back(c);
      self(self, a + 1, deg + n);
      picked.pop_back();
    }
  };
  rec(rec, 0, 0);
  return out;
}

PolyPath twisted_bracket_poly(const LInftyAlgebra& alg, const PolyPath& u, std::span<const PolyPath> args, int order) {
  const int p = static_cast<int>(args.size());
  PolyPath out(alg.space());
  for (int m = 0; p + m < alg.strictness(); ++m) {
    const auto& b = alg.bracket(p + m);
    if (b.empty()) continue;
    std::vector<PolyPath> full(static_cast<std::size_t>(m), u);
    full.insert(full.end(), args.begin(), args.end());
    out += Rational(1, factorial(static_cast<unsigned>(m))) * eval_bracket_poly(b, full, order);
  }
  return out;
}

PolyPath mc_poly(const LInftyAlgebra& alg, const PolyPath& u, int order) {
  return twisted_bracket_poly(alg, u, {}, order);
}

}  // namespace ldeform
