#include "ldeform/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace ldeform {

int Composition::total() const { return std::accumulate(parts.begin(), parts.end(), 0); }

bool Composition::is_nondecreasing() const {
  for (std::size_t j = 1; j < parts.size(); ++j)
    if (parts[j - 1] > parts[j]) return false;
  return true;
}

Composition RepeatedFactorization::to_composition() const {
  Composition c;
  for (std::size_t d = 0; d < values.size(); ++d)
    c.parts.insert(c.parts.end(), static_cast<std::size_t>(multiplicities[d]), values[d]);
  return c;
}

namespace {

void check_range(int k, int i) {
  if (i < 1 || i > k)
    throw std::invalid_argument("compositions need 1 <= i <= k (got k=" + std::to_string(k) +
                                ", i=" + std::to_string(i) + ")");
}

void fill(int remaining, int slots, int min_part, bool nondecreasing, std::vector<int>& cur,
          std::vector<Composition>& out) {
  if (slots == 0) {
    if (remaining == 0) out.push_back({cur});
    return;
  }
  int lo = nondecreasing ? min_part : 1;
  // Every later slot needs at least lo (nondecreasing) or 1.
  int reserve = nondecreasing ? 0 : slots - 1;
  for (int r = lo; r <= remaining - reserve; ++r) {
    if (nondecreasing && r * slots > remaining) break;
    cur.push_back(r);
    fill(remaining - r, slots - 1, r, nondecreasing, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Composition> compositions(int k, int i) {
  check_range(k, i);
  std::vector<Composition> out;
  std::vector<int> cur;
  fill(k, i, 1, false, cur, out);
  return out;
}

std::vector<Composition> nondecreasing_compositions(int k, int i) {
  check_range(k, i);
  std::vector<Composition> out;
  std::vector<int> cur;
  fill(k, i, 1, true, cur, out);
  return out;
}

BigInt multinomial(int k, const Composition& parts) {
  if (parts.total() != k)
    throw std::invalid_argument("parts sum to " + std::to_string(parts.total()) + ", not " +
                                std::to_string(k));
  BigInt r = factorial(static_cast<unsigned>(k));
  for (int p : parts.parts) {
    if (p < 0) throw std::invalid_argument("negative part");
    r /= factorial(static_cast<unsigned>(p));
  }
  return r;
}

RepeatedFactorization factorize(const Composition& parts) {
  std::vector<int> sorted = parts.parts;
  std::sort(sorted.begin(), sorted.end());
  RepeatedFactorization f;
  for (int v : sorted) {
    if (!f.values.empty() && f.values.back() == v) {
      ++f.multiplicities.back();
    } else {
      f.values.push_back(v);
      f.multiplicities.push_back(1);
    }
  }
  return f;
}

BigInt orbit_size(const Composition& parts) {
  for (int p : parts.parts)
    if (p < 1) throw std::invalid_argument("composition parts must be positive");
  auto f = factorize(parts);
  BigInt r = factorial(static_cast<unsigned>(parts.length()));
  for (int b : f.multiplicities) r /= factorial(static_cast<unsigned>(b));
  return r;
}

// ---------------------------------------------------------------------------

int super_catalan_cap() {
  static const int cap = [] {
    if (const char* env = std::getenv("LDEFORM_MEMO_CAP")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    return 200;
  }();
  return cap;
}

namespace {

// conv[i][m] = Σ_{r_1+..+r_i=m} C_{r_1}..C_{r_i}; row 1 is C itself.
struct CatalanTable {
  std::mutex mutex;
  std::vector<BigInt> values{BigInt(0), BigInt(1)};
  std::vector<std::vector<BigInt>> conv{{}, {BigInt(0), BigInt(1)}};

  void extend_to(int k) {
    while (static_cast<int>(values.size()) <= k) {
      const int m = static_cast<int>(values.size());
      for (auto& row : conv) row.resize(static_cast<std::size_t>(m) + 1);
      conv.resize(static_cast<std::size_t>(m) + 1, std::vector<BigInt>(static_cast<std::size_t>(m) + 1));
      BigInt ck = 0;
      for (int i = 2; i <= m; ++i) {
        BigInt s = 0;
        for (int r = 1; r <= m - i + 1; ++r)
          s += values[static_cast<std::size_t>(r)] * conv[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(m - r)];
        conv[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] = s;
        ck += s;
      }
      values.push_back(ck);
      conv[1][static_cast<std::size_t>(m)] = ck;
    }
  }
};

CatalanTable& catalan_table() {
  static CatalanTable table;
  return table;
}

}  // namespace

BigInt super_catalan(int k) {
  if (k < 1) throw std::invalid_argument("super_catalan needs k >= 1");
  if (k > super_catalan_cap())
    throw std::out_of_range("super_catalan(" + std::to_string(k) + ") exceeds memo cap " +
                            std::to_string(super_catalan_cap()));
  auto& t = catalan_table();
  std::lock_guard lock(t.mutex);
  t.extend_to(k);
  return t.values[static_cast<std::size_t>(k)];
}

namespace {

// All bracketings of letters [first, first+len) as strings.
std::set<std::string> bracketings(int first, int len) {
  if (len == 1) return {"(" + std::to_string(first) + ")"};
  std::set<std::string> out;
  for (int i = 2; i <= len; ++i) {
    for (const auto& comp : compositions(len, i)) {
      std::vector<std::string> partial{""};
      int start = first;
      for (int part : comp.parts) {
        auto inner = bracketings(start, part);
        std::vector<std::string> next;
        for (const auto& p : partial)
          for (const auto& b : inner) next.push_back(p + (part == 1 ? b : "(" + b + ")"));
        partial = std::move(next);
        start += part;
      }
      out.insert(partial.begin(), partial.end());
    }
  }
  return out;
}

}  // namespace

BigInt count_bracketings(int k) {
  if (k < 1 || k > 8) throw std::out_of_range("count_bracketings supports 1 <= k <= 8");
  return BigInt(static_cast<unsigned long>(bracketings(1, k).size()));
}

double asymptotic_ratio_check(int k) {
  if (k < 1) throw std::invalid_argument("asymptotic_ratio_check needs k >= 1");
  return Rational(super_catalan(k + 1), super_catalan(k)).get_d();
}

double convergence_radius(double h1_norm, double alpha) {
  const double prod = h1_norm * alpha;
  if (!(prod > 0.0) || h1_norm < 0.0 || alpha < 0.0 || !std::isfinite(prod))
    throw std::domain_error("degenerate bound: ‖h1‖·α must be positive");
  return 1.0 / (12.0 * prod);
}

}  // namespace ldeform
