#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldeform/rational.hpp"

namespace ldeform {

// A basis vector of a graded space, addressed by (degree, index within degree).
// Ordered lexicographically, which is the canonical order for symmetric tuples.
struct Slot {
  int degree = 0;
  int index = 0;
  auto operator<=>(const Slot&) const = default;
};

// Finite-dimensional V = ⊕ V_d. Basis vectors carry a global index, assigned in
// increasing (degree, index) order, so comparing global indices compares slots.
class GradedSpace {
 public:
  GradedSpace() = default;
  explicit GradedSpace(const std::map<int, int>& dims,
                       std::map<int, std::vector<std::string>> labels = {});

  int dim(int degree) const;
  int total_dim() const { return total_; }
  // Degrees with nonzero dimension, ascending.
  const std::vector<int>& degrees() const { return degrees_; }
  int min_degree() const;
  int max_degree() const;

  bool contains(Slot s) const;
  int global_index(Slot s) const;
  Slot slot(int global) const;
  int degree_of(int global) const { return degree_of_[static_cast<std::size_t>(global)]; }
  // Global index of (degree, 0).
  int offset(int degree) const;

  // Empty when the degree carries no labels.
  const std::vector<std::string>& labels(int degree) const;
  std::string label(Slot s) const;

  bool operator==(const GradedSpace& other) const;

 private:
  std::map<int, int> dims_;
  std::map<int, int> offsets_;
  std::map<int, std::vector<std::string>> labels_;
  std::vector<int> degrees_;
  std::vector<int> degree_of_;
  int total_ = 0;
};

using SpacePtr = std::shared_ptr<const GradedSpace>;

SpacePtr make_space(const std::map<int, int>& dims,
                    std::map<int, std::vector<std::string>> labels = {});

// Sparse coefficient list keyed by global index, sorted, no explicit zeros.
using SparseVector = std::vector<std::pair<int, Rational>>;

class Element {
 public:
  Element() = default;
  explicit Element(SpacePtr space);
  Element(SpacePtr space, std::vector<Rational> coords);

  static Element zero(SpacePtr space) { return Element(std::move(space)); }
  static Element basis(SpacePtr space, Slot s, const Rational& coeff = 1);
  // Element supported in one degree, coordinates given for that degree.
  static Element in_degree(SpacePtr space, int degree, std::span<const Rational> coords);
  static Element from_sparse(SpacePtr space, const SparseVector& v);

  const SpacePtr& space() const { return space_; }
  const std::vector<Rational>& coords() const { return coords_; }
  const Rational& operator[](int global) const { return coords_[static_cast<std::size_t>(global)]; }
  const Rational& coeff(Slot s) const;
  void set(Slot s, const Rational& value);
  void add_to(int global, const Rational& value);

  // Coordinates restricted to one degree (zeros when the degree is empty).
  std::vector<Rational> component(int degree) const;
  SparseVector nonzeros() const;

  bool is_zero() const;
  bool is_homogeneous() const;
  // Degree of a nonzero homogeneous element.
  std::optional<int> degree() const;

  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(const Rational& s);

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Rational& s, Element a) { return a *= s; }
  friend Element operator-(Element a) { return a *= Rational(-1); }
  friend bool operator==(const Element& a, const Element& b);

 private:
  void check_same_space(const Element& other) const;

  SpacePtr space_;
  std::vector<Rational> coords_;
};

// Koszul sign ε_σ(v_1..v_k) of the reordering v ↦ (v_σ(0), ..., v_σ(k-1)).
// perm is 0-based. Each inverted pair contributes (-1)^{deg·deg} of the two
// elements that swap relative order.
int koszul_sign(std::span<const int> perm, std::span<const int> degrees);

struct Canonical {
  std::vector<Slot> slots;  // nondecreasing
  int sign = 1;
  bool annihilated = false;  // an odd slot repeats, so every symmetric value vanishes
};

// f(inputs) = sign · f(slots) for every graded-symmetric f.
Canonical canonicalize(const GradedSpace& space, std::span<const Slot> inputs);

// In-place version on global indices; returns the sign, or 0 when annihilated.
int sort_with_koszul_sign(const GradedSpace& space, std::vector<int>& globals);

// Graded-symmetric multilinear map of degree +1, stored on canonical tuples.
class Bracket {
 public:
  using Key = std::vector<int>;  // nondecreasing global indices

  Bracket() = default;
  Bracket(SpacePtr space, int arity);

  int arity() const { return arity_; }
  const SpacePtr& space() const { return space_; }
  const std::map<Key, SparseVector>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  // Adds value to b(inputs); inputs are canonicalized with their Koszul sign.
  // value must be homogeneous of degree Σ deg(inputs) + 1.
  void add(std::span<const Slot> inputs, const Element& value);
  void add_canonical(const Key& key, const SparseVector& value, const Rational& scale = 1);

  // Value on a tuple of basis vectors in any order.
  SparseVector on_basis(std::vector<int> globals) const;

  friend bool operator==(const Bracket& a, const Bracket& b);

 private:
  SpacePtr space_;
  int arity_ = 0;
  std::map<Key, SparseVector> entries_;
};

// Multilinear expansion over the nonzero coordinates of each argument.
Element eval_bracket(const Bracket& b, std::span<const Element> args);

void axpy(SparseVector& acc, const Rational& scale, const SparseVector& x);

}  // namespace ldeform
