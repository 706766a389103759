#pragma once

#include <vector>

#include "ldeform/rational.hpp"

namespace ldeform {

// An ordered tuple (r_1, ..., r_i) of positive integers.
struct Composition {
  std::vector<int> parts;

  int total() const;
  int length() const { return static_cast<int>(parts.size()); }
  bool is_nondecreasing() const;
  auto operator<=>(const Composition&) const = default;
};

// r_{a_1} < ... < r_{a_s} with multiplicities b_1..b_s.
struct RepeatedFactorization {
  std::vector<int> values;
  std::vector<int> multiplicities;

  Composition to_composition() const;  // the nondecreasing representative
};

// All i-tuples of positive integers summing to k, lexicographic. Count C(k-1, i-1).
std::vector<Composition> compositions(int k, int i);
// Only the nondecreasing ones: one representative per S_i-orbit.
std::vector<Composition> nondecreasing_compositions(int k, int i);

// k! / (r_1! ... r_i!); requires Σ r = k.
BigInt multinomial(int k, const Composition& parts);
RepeatedFactorization factorize(const Composition& parts);
// Number of distinct reorderings: i! / (b_1! ... b_s!).
BigInt orbit_size(const Composition& parts);

// C_1 = 1, C_k = Σ_{i=2..k} Σ_{r_1+..+r_i=k} C_{r_1}..C_{r_i}. Memoized; safe for
// concurrent callers. The table cap defaults to 200 and can be raised through the
// environment variable LDEFORM_MEMO_CAP.
BigInt super_catalan(int k);
int super_catalan_cap();

// Builds every bracketing of the word 1 2 .. k explicitly and counts them.
// Independent of the recurrence; limited to k <= 8.
BigInt count_bracketings(int k);

// C_{k+1} / C_k as a double.
double asymptotic_ratio_check(int k);

// 1 / (12 · ‖h_1‖ · α).
double convergence_radius(double h1_norm, double alpha);

}  // namespace ldeform
