#include "ldeform/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ldeform::io {

InputError::InputError(std::string where, const std::string& what)
    : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw InputError("line " + std::to_string(line) + ", column " + std::to_string(col), msg);
  }
}

const json& field(const json& obj, const std::string& ptr, const char* name) {
  if (!obj.is_object()) throw InputError(ptr.empty() ? "/" : ptr, "expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) throw InputError(ptr + "/" + name, "missing field");
  return *it;
}

int as_int(const json& v, const std::string& ptr) {
  if (!v.is_number_integer()) throw InputError(ptr, "expected an integer");
  return v.get<int>();
}

const json& as_array(const json& v, const std::string& ptr) {
  if (!v.is_array()) throw InputError(ptr, "expected an array");
  return v;
}

Rational as_rational(const json& v, const std::string& ptr) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (!v.is_string()) throw InputError(ptr, "expected a rational string such as \"-3/4\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(ptr, e.what());
  }
}

double as_double(const json& v, const std::string& ptr) {
  if (v.is_number()) return v.get<double>();
  return to_double(as_rational(v, ptr));
}

void check_format(const json& j, std::string_view want) {
  const auto& f = field(j, "", "format");
  if (!f.is_string() || f.get<std::string>() != want)
    throw InputError("/format", "expected \"" + std::string(want) + "\"");
}

Slot as_slot(const json& v, const std::string& ptr, const GradedSpace& space) {
  if (!v.is_array() || v.size() != 2) throw InputError(ptr, "expected [degree, index]");
  Slot s{as_int(v[0], ptr + "/0"), as_int(v[1], ptr + "/1")};
  if (!space.contains(s))
    throw InputError(ptr, "no basis vector " + std::to_string(s.index) + " in degree " + std::to_string(s.degree));
  return s;
}

bool inline_array(const json& j) {
  return std::all_of(j.begin(), j.end(), [](const json& x) {
    return x.is_primitive() || (x.is_array() && std::all_of(x.begin(), x.end(), [](const json& y) { return y.is_primitive(); }));
  });
}

void write(std::string& out, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + json(k).dump() + ": ";
      write(out, v, indent + 2);
    }
    out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
  } else if (j.is_array() && !inline_array(j)) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      write(out, j[i], indent + 2);
    }
    out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
  } else if (j.is_array()) {
    out += "[";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ", ";
      write(out, j[i], indent);
    }
    out += "]";
  } else {
    out += j.dump();
  }
}

}  // namespace

std::string pretty(const json& j) {
  std::string out;
  write(out, j, 0);
  return out + "\n";
}

namespace {

std::string dump(const json& j) { return pretty(j); }

}  // namespace

std::string detect_format(std::string_view text) {
  const json j = parse_json(text);
  const auto& f = field(j, "", "format");
  if (f == std::string(kAlgebraFormat)) return "algebra";
  if (f == std::string(kLieFormat)) return "lie";
  if (f == std::string(kPathFormat)) return "path";
  throw InputError("/format", "unknown format");
}

LInftyAlgebra parse_algebra(std::string_view text) {
  const json j = parse_json(text);
  check_format(j, kAlgebraFormat);
  std::map<int, int> dims;
  std::map<int, std::vector<std::string>> labels;
  const auto& degrees = as_array(field(j, "", "degrees"), "/degrees");
  for (std::size_t a = 0; a < degrees.size(); ++a) {
    const std::string ptr = "/degrees/" + std::to_string(a);
    const int d = as_int(field(degrees[a], ptr, "degree"), ptr + "/degree");
    const int n = as_int(field(degrees[a], ptr, "dim"), ptr + "/dim");
    if (n < 0) throw InputError(ptr + "/dim", "negative dimension");
    if (dims.count(d)) throw InputError(ptr + "/degree", "degree listed twice");
    dims[d] = n;
    if (auto it = degrees[a].find("labels"); it != degrees[a].end()) {
      const auto& ls = as_array(*it, ptr + "/labels");
      if (static_cast<int>(ls.size()) != n) throw InputError(ptr + "/labels", "one label per basis vector expected");
      for (std::size_t b = 0; b < ls.size(); ++b) {
        if (!ls[b].is_string()) throw InputError(ptr + "/labels/" + std::to_string(b), "expected a string");
        labels[d].push_back(ls[b].get<std::string>());
      }
    }
  }
  auto space = make_space(dims, labels);

  const auto& brackets = as_array(field(j, "", "brackets"), "/brackets");
  std::map<int, Bracket> by_arity;
  int max_arity = -1;
  for (std::size_t a = 0; a < brackets.size(); ++a) {
    const std::string ptr = "/brackets/" + std::to_string(a);
    const int k = as_int(field(brackets[a], ptr, "arity"), ptr + "/arity");
    if (k < 0) throw InputError(ptr + "/arity", "negative arity");
    max_arity = std::max(max_arity, k);
    auto [it, fresh] = by_arity.try_emplace(k, space, k);
    (void)fresh;
    const auto& entries = as_array(field(brackets[a], ptr, "entries"), ptr + "/entries");
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const std::string ep = ptr + "/entries/" + std::to_string(e);
      const auto& inputs = as_array(field(entries[e], ep, "inputs"), ep + "/inputs");
      if (static_cast<int>(inputs.size()) != k)
        throw InputError(ep + "/inputs", "arity " + std::to_string(k) + " needs " + std::to_string(k) + " inputs");
      std::vector<Slot> slots;
      int deg_sum = 0;
      for (std::size_t s = 0; s < inputs.size(); ++s) {
        slots.push_back(as_slot(inputs[s], ep + "/inputs/" + std::to_string(s), *space));
        deg_sum += slots.back().degree;
      }
      const Slot out = as_slot(field(entries[e], ep, "output"), ep + "/output", *space);
      if (out.degree != deg_sum + 1)
        throw InputError(ep + "/output", "bracket must have degree +1: expected output degree " +
                                             std::to_string(deg_sum + 1));
      const Rational c = as_rational(field(entries[e], ep, "coeff"), ep + "/coeff");
      try {
        it->second.add(slots, Element::basis(space, out, c));
      } catch (const std::exception& ex) {
        throw InputError(ep, ex.what());
      }
    }
  }
  int strictness = max_arity + 1;
  if (auto it = j.find("strictness"); it != j.end()) {
    strictness = as_int(*it, "/strictness");
    if (strictness < 0) throw InputError("/strictness", "negative strictness");
    if (max_arity >= strictness)
      throw InputError("/strictness", "bracket of arity " + std::to_string(max_arity) +
                                          " present but strictness is " + std::to_string(strictness));
  }
  std::vector<Bracket> bs;
  for (int k = 0; k < strictness; ++k) {
    auto it = by_arity.find(k);
    bs.push_back(it == by_arity.end() ? Bracket(space, k) : std::move(it->second));
  }
  return LInftyAlgebra(space, std::move(bs), strictness);
}

std::string serialize_algebra(const LInftyAlgebra& alg) {
  const auto& space = *alg.space();
  json j;
  j["format"] = kAlgebraFormat;
  json degrees = json::array();
  for (int d : space.degrees()) {
    json deg;
    deg["degree"] = d;
    deg["dim"] = space.dim(d);
    if (const auto& ls = space.labels(d); !ls.empty()) deg["labels"] = ls;
    degrees.push_back(std::move(deg));
  }
  j["degrees"] = std::move(degrees);
  j["strictness"] = alg.strictness();
  json brackets = json::array();
  for (int k = 0; k < alg.strictness(); ++k) {
    const auto& b = alg.bracket(k);
    if (b.empty()) continue;
    json entries = json::array();
    for (const auto& [key, value] : b.entries()) {
      json inputs = json::array();
      for (int g : key) {
        const Slot s = space.slot(g);
        inputs.push_back(json::array({s.degree, s.index}));
      }
      for (const auto& [g, c] : value) {
        const Slot s = space.slot(g);
        json e;
        e["inputs"] = inputs;
        e["output"] = json::array({s.degree, s.index});
        e["coeff"] = to_string(c);
        entries.push_back(std::move(e));
      }
    }
    json bj;
    bj["arity"] = k;
    bj["entries"] = std::move(entries);
    brackets.push_back(std::move(bj));
  }
  j["brackets"] = std::move(brackets);
  return dump(j);
}

LieStructure parse_lie(std::string_view text) {
  const json j = parse_json(text);
  check_format(j, kLieFormat);
  const int n = as_int(field(j, "", "dim"), "/dim");
  if (n < 1) throw InputError("/dim", "dimension must be positive");
  const auto& cs = as_array(field(j, "", "constants"), "/constants");
  std::vector<StructureConstant> constants;
  for (std::size_t a = 0; a < cs.size(); ++a) {
    const std::string ptr = "/constants/" + std::to_string(a);
    StructureConstant c;
    c.i = as_int(field(cs[a], ptr, "i"), ptr + "/i");
    c.j = as_int(field(cs[a], ptr, "j"), ptr + "/j");
    c.k = as_int(field(cs[a], ptr, "k"), ptr + "/k");
    for (auto [v, name] : {std::pair{c.i, "i"}, {c.j, "j"}, {c.k, "k"}})
      if (v < 0 || v >= n) throw InputError(ptr + "/" + name, "index out of range 0.." + std::to_string(n - 1));
    if (c.i >= c.j) throw InputError(ptr, "constants need i < j");
    c.coeff = as_rational(field(cs[a], ptr, "coeff"), ptr + "/coeff");
    constants.push_back(std::move(c));
  }
  return lie_from_constants(n, constants);
}

std::string serialize_lie(const LieStructure& mu) {
  json j;
  j["format"] = kLieFormat;
  j["dim"] = mu.n();
  json cs = json::array();
  for (const auto& c : constants_of(mu)) {
    json e;
    e["i"] = c.i;
    e["j"] = c.j;
    e["k"] = c.k;
    e["coeff"] = to_string(c.coeff);
    cs.push_back(std::move(e));
  }
  j["constants"] = std::move(cs);
  return dump(j);
}

DeformationPath parse_path(std::string_view text, const LieStructure& mu0) {
  const json j = parse_json(text);
  check_format(j, kPathFormat);
  const auto& kind = field(j, "", "kind");
  const int n = mu0.n();
  if (kind == "orbit") {
    const auto& rows = as_array(field(j, "", "A"), "/A");
    if (static_cast<int>(rows.size()) != n) throw InputError("/A", "expected " + std::to_string(n) + " rows");
    FloatMatrix A(n, n);
    for (int r = 0; r < n; ++r) {
      const std::string rp = "/A/" + std::to_string(r);
      const auto& row = as_array(rows[static_cast<std::size_t>(r)], rp);
      if (static_cast<int>(row.size()) != n) throw InputError(rp, "expected " + std::to_string(n) + " entries");
      for (int c = 0; c < n; ++c) A(r, c) = as_double(row[static_cast<std::size_t>(c)], rp + "/" + std::to_string(c));
    }
    return DeformationPath::orbit(to_float(mu0), A);
  }
  if (kind == "samples") {
    const auto& times = as_array(field(j, "", "times"), "/times");
    const auto& structures = as_array(field(j, "", "structures"), "/structures");
    if (times.size() != structures.size()) throw InputError("/structures", "one structure per time expected");
    std::vector<double> ts;
    std::vector<FloatCochain> mus;
    for (std::size_t a = 0; a < times.size(); ++a) {
      ts.push_back(as_double(times[a], "/times/" + std::to_string(a)));
      const std::string sp = "/structures/" + std::to_string(a);
      const auto& cs = as_array(field(structures[a], sp, "constants"), sp + "/constants");
      FloatCochain mu(n, 2);
      for (std::size_t b = 0; b < cs.size(); ++b) {
        const std::string cp = sp + "/constants/" + std::to_string(b);
        const int i = as_int(field(cs[b], cp, "i"), cp + "/i");
        const int jj = as_int(field(cs[b], cp, "j"), cp + "/j");
        const int k = as_int(field(cs[b], cp, "k"), cp + "/k");
        if (i < 0 || jj >= n || k < 0 || k >= n || i >= jj) throw InputError(cp, "bad index triple");
        const int t[] = {i, jj};
        mu.at(t, k) += as_double(field(cs[b], cp, "coeff"), cp + "/coeff");
      }
      mus.push_back(std::move(mu));
    }
    try {
      return DeformationPath::samples(std::move(ts), std::move(mus));
    } catch (const std::invalid_argument& e) {
      throw InputError("/times", e.what());
    }
  }
  throw InputError("/kind", "expected \"orbit\" or \"samples\"");
}

Element parse_element(std::string_view text, const SpacePtr& space) {
  Element x(space);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string item(text.substr(pos, end - pos));
    pos = end + 1;
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    const auto eq = item.find('=');
    if (colon == std::string::npos || eq == std::string::npos || eq < colon)
      throw InputError(item, "expected deg:idx=coeff");
    Slot s;
    Rational c;
    try {
      s.degree = std::stoi(item.substr(0, colon));
      s.index = std::stoi(item.substr(colon + 1, eq - colon - 1));
      c = parse_rational(item.substr(eq + 1));
    } catch (const std::exception& e) {
      throw InputError(item, "expected deg:idx=coeff");
    }
    if (!space->contains(s)) throw InputError(item, "no such basis vector");
    x.add_to(space->global_index(s), c);
  }
  return x;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace ldeform::io
