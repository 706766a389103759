#include "ldeform/graded.hpp"

#include <algorithm>
#include <stdexcept>

namespace ldeform {

GradedSpace::GradedSpace(const std::map<int, int>& dims,
                         std::map<int, std::vector<std::string>> labels)
    : labels_(std::move(labels)) {
  for (auto [degree, dim] : dims) {
    if (dim < 0) throw std::invalid_argument("negative dimension in degree " + std::to_string(degree));
    if (dim == 0) continue;
    dims_[degree] = dim;
    offsets_[degree] = total_;
    degrees_.push_back(degree);
    degree_of_.insert(degree_of_.end(), static_cast<std::size_t>(dim), degree);
    total_ += dim;
  }
  for (const auto& [degree, names] : labels_) {
    if (!names.empty() && static_cast<int>(names.size()) != dim(degree))
      throw std::invalid_argument("label count does not match dimension in degree " +
                                  std::to_string(degree));
  }
}

int GradedSpace::dim(int degree) const {
  auto it = dims_.find(degree);
  return it == dims_.end() ? 0 : it->second;
}

int GradedSpace::min_degree() const { return degrees_.empty() ? 0 : degrees_.front(); }
int GradedSpace::max_degree() const { return degrees_.empty() ? 0 : degrees_.back(); }

bool GradedSpace::contains(Slot s) const { return s.index >= 0 && s.index < dim(s.degree); }

int GradedSpace::global_index(Slot s) const {
  if (!contains(s))
    throw std::out_of_range("slot (" + std::to_string(s.degree) + "," + std::to_string(s.index) +
                            ") not in space");
  return offsets_.at(s.degree) + s.index;
}

Slot GradedSpace::slot(int global) const {
  if (global < 0 || global >= total_) throw std::out_of_range("global index out of range");
  int d = degree_of(global);
  return {d, global - offsets_.at(d)};
}

int GradedSpace::offset(int degree) const {
  auto it = offsets_.find(degree);
  if (it != offsets_.end()) return it->second;
  // Empty degree: position where it would start.
  auto next = offsets_.upper_bound(degree);
  return next == offsets_.end() ? total_ : next->second;
}

const std::vector<std::string>& GradedSpace::labels(int degree) const {
  static const std::vector<std::string> none;
  auto it = labels_.find(degree);
  return it == labels_.end() ? none : it->second;
}

std::string GradedSpace::label(Slot s) const {
  const auto& names = labels(s.degree);
  if (!names.empty()) return names[static_cast<std::size_t>(s.index)];
  return "e(" + std::to_string(s.degree) + "," + std::to_string(s.index) + ")";
}

bool GradedSpace::operator==(const GradedSpace& other) const {
  return dims_ == other.dims_;
}

SpacePtr make_space(const std::map<int, int>& dims, std::map<int, std::vector<std::string>> labels) {
  return std::make_shared<const GradedSpace>(dims, std::move(labels));
}

// ---------------------------------------------------------------------------

Element::Element(SpacePtr space) : space_(std::move(space)) {
  coords_.resize(static_cast<std::size_t>(space_->total_dim()));
}

Element::Element(SpacePtr space, std::vector<Rational> coords)
    : space_(std::move(space)), coords_(std::move(coords)) {
  if (static_cast<int>(coords_.size()) != space_->total_dim())
    throw std::invalid_argument("coordinate count does not match the space");
}

Element Element::basis(SpacePtr space, Slot s, const Rational& coeff) {
  Element e(std::move(space));
  e.set(s, coeff);
  return e;
}

Element Element::in_degree(SpacePtr space, int degree, std::span<const Rational> coords) {
  if (static_cast<int>(coords.size()) != space->dim(degree))
    throw std::invalid_argument("component size does not match dim V_" + std::to_string(degree));
  Element e(space);
  int off = space->offset(degree);
  for (std::size_t i = 0; i < coords.size(); ++i) e.coords_[static_cast<std::size_t>(off) + i] = coords[i];
  return e;
}

Element Element::from_sparse(SpacePtr space, const SparseVector& v) {
  Element e(std::move(space));
  for (const auto& [g, c] : v) e.coords_[static_cast<std::size_t>(g)] += c;
  return e;
}

const Rational& Element::coeff(Slot s) const {
  return coords_[static_cast<std::size_t>(space_->global_index(s))];
}

void Element::set(Slot s, const Rational& value) {
  coords_[static_cast<std::size_t>(space_->global_index(s))] = value;
}

void Element::add_to(int global, const Rational& value) {
  coords_[static_cast<std::size_t>(global)] += value;
}

std::vector<Rational> Element::component(int degree) const {
  int n = space_->dim(degree);
  int off = space_->offset(degree);
  return {coords_.begin() + off, coords_.begin() + off + n};
}

SparseVector Element::nonzeros() const {
  SparseVector out;
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (sgn(coords_[i]) != 0) out.emplace_back(static_cast<int>(i), coords_[i]);
  return out;
}

bool Element::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

bool Element::is_homogeneous() const {
  std::optional<int> seen;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (sgn(coords_[i]) == 0) continue;
    int d = space_->degree_of(static_cast<int>(i));
    if (seen && *seen != d) return false;
    seen = d;
  }
  return true;
}

std::optional<int> Element::degree() const {
  std::optional<int> seen;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (sgn(coords_[i]) == 0) continue;
    int d = space_->degree_of(static_cast<int>(i));
    if (seen && *seen != d) return std::nullopt;
    seen = d;
  }
  return seen;
}

void Element::check_same_space(const Element& other) const {
  if (space_ != other.space_ && !(*space_ == *other.space_))
    throw std::invalid_argument("elements live in different spaces");
}

Element& Element::operator+=(const Element& other) {
  check_same_space(other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Element& Element::operator-=(const Element& other) {
  check_same_space(other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Element& Element::operator*=(const Rational& s) {
  for (auto& c : coords_) c *= s;
  return *this;
}

bool operator==(const Element& a, const Element& b) {
  if (a.space_ != b.space_ && !(*a.space_ == *b.space_)) return false;
  return a.coords_ == b.coords_;
}

// ---------------------------------------------------------------------------

int koszul_sign(std::span<const int> perm, std::span<const int> degrees) {
  if (perm.size() != degrees.size())
    throw std::invalid_argument("permutation and degree list differ in length");
  const auto k = perm.size();
  std::vector<bool> seen(k, false);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= k || seen[static_cast<std::size_t>(p)])
      throw std::invalid_argument("not a permutation");
    seen[static_cast<std::size_t>(p)] = true;
  }
  int sign = 1;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (perm[i] > perm[j]) {
        long long prod = static_cast<long long>(degrees[static_cast<std::size_t>(perm[i])]) *
                         degrees[static_cast<std::size_t>(perm[j])];
        if (prod % 2 != 0) sign = -sign;
      }
  return sign;
}

int sort_with_koszul_sign(const GradedSpace& space, std::vector<int>& globals) {
  int sign = 1;
  for (std::size_t i = 1; i < globals.size(); ++i) {
    for (std::size_t j = i; j > 0 && globals[j - 1] > globals[j]; --j) {
      if ((space.degree_of(globals[j - 1]) * space.degree_of(globals[j])) % 2 != 0) sign = -sign;
      std::swap(globals[j - 1], globals[j]);
    }
  }
  for (std::size_t i = 1; i < globals.size(); ++i)
    if (globals[i] == globals[i - 1] && space.degree_of(globals[i]) % 2 != 0) return 0;
  return sign;
}

Canonical canonicalize(const GradedSpace& space, std::span<const Slot> inputs) {
  std::vector<int> globals;
  globals.reserve(inputs.size());
  for (const auto& s : inputs) globals.push_back(space.global_index(s));
  int sign = sort_with_koszul_sign(space, globals);
  Canonical c;
  for (int g : globals) c.slots.push_back(space.slot(g));
  c.sign = sign == 0 ? 1 : sign;
  c.annihilated = sign == 0;
  return c;
}

// ---------------------------------------------------------------------------

void axpy(SparseVector& acc, const Rational& scale, const SparseVector& x) {
  if (sgn(scale) == 0 || x.empty()) return;
  SparseVector out;
  out.reserve(acc.size() + x.size());
  std::size_t i = 0, j = 0;
  while (i < acc.size() || j < x.size()) {
    if (j == x.size() || (i < acc.size() && acc[i].first < x[j].first)) {
      out.push_back(std::move(acc[i++]));
    } else if (i == acc.size() || x[j].first < acc[i].first) {
      out.emplace_back(x[j].first, scale * x[j].second);
      ++j;
    } else {
      Rational v = acc[i].second + scale * x[j].second;
      if (sgn(v) != 0) out.emplace_back(acc[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  acc = std::move(out);
}

Bracket::Bracket(SpacePtr space, int arity) : space_(std::move(space)), arity_(arity) {
  if (arity < 0) throw std::invalid_argument("negative bracket arity");
}

void Bracket::add(std::span<const Slot> inputs, const Element& value) {
  if (static_cast<int>(inputs.size()) != arity_)
    throw std::invalid_argument("bracket entry has wrong arity");
  int target = 1;
  for (const auto& s : inputs) {
    if (!space_->contains(s)) throw std::out_of_range("bracket input slot not in space");
    target += s.degree;
  }
  if (auto d = value.degree(); d && *d != target)
    throw std::invalid_argument("bracket output must have degree " + std::to_string(target));
  if (!value.is_homogeneous()) throw std::invalid_argument("bracket output must be homogeneous");
  auto canon = canonicalize(*space_, inputs);
  if (canon.annihilated) {
    if (!value.is_zero())
      throw std::invalid_argument("nonzero value on an odd repeated input");
    return;
  }
  Key key;
  for (const auto& s : canon.slots) key.push_back(space_->global_index(s));
  add_canonical(key, value.nonzeros(), Rational(canon.sign));
}

void Bracket::add_canonical(const Key& key, const SparseVector& value, const Rational& scale) {
  if (value.empty()) return;
  auto& slot = entries_[key];
  axpy(slot, scale, value);
  if (slot.empty()) entries_.erase(key);
}

SparseVector Bracket::on_basis(std::vector<int> globals) const {
  int sign = sort_with_koszul_sign(*space_, globals);
  if (sign == 0) return {};
  auto it = entries_.find(globals);
  if (it == entries_.end()) return {};
  if (sign == 1) return it->second;
  SparseVector out = it->second;
  for (auto& [g, c] : out) c = -c;
  return out;
}

bool operator==(const Bracket& a, const Bracket& b) {
  return a.arity_ == b.arity_ && a.entries_ == b.entries_;
}

Element eval_bracket(const Bracket& b, std::span<const Element> args) {
  if (static_cast<int>(args.size()) != b.arity())
    throw std::invalid_argument("bracket of arity " + std::to_string(b.arity()) + " given " +
                                std::to_string(args.size()) + " arguments");
  const auto& space = b.space();
  for (const auto& a : args)
    if (a.space() != space && !(*a.space() == *space))
      throw std::invalid_argument("argument from a foreign space");
  Element out(space);
  if (b.empty()) return out;

  std::vector<SparseVector> nz;
  nz.reserve(args.size());
  for (const auto& a : args) {
    nz.push_back(a.nonzeros());
    if (nz.back().empty()) return out;
  }

  const std::size_t k = args.size();
  std::vector<int> chosen(k);
  std::vector<int> key;
  auto expand = [&](auto&& self, std::size_t level, const Rational& coeff) -> void {
    if (level == k) {
      key = chosen;
      int sign = sort_with_koszul_sign(*space, key);
      if (sign == 0) return;
      auto it = b.entries().find(key);
      if (it == b.entries().end()) return;
      Rational s = sign * coeff;
      for (const auto& [g, c] : it->second) out.add_to(g, s * c);
      return;
    }
    for (const auto& [g, c] : nz[level]) {
      chosen[level] = g;
      self(self, level + 1, coeff * c);
    }
  };
  expand(expand, 0, Rational(1));
  return out;
}

}  // namespace ldeform
