#include "commands.hpp"

#include <cmath>
#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldeform/combinatorics.hpp"
#include "ldeform/io.hpp"
#include "ldeform/lie.hpp"
#include "ldeform/obstruction.hpp"
#include "ldeform/transport.hpp"

namespace ldeform::cli {

using json = io::json;

namespace {

struct Report {
  std::string command;
  std::vector<std::string> digests;
  json results = json::object();
  std::string status = "ok";
  int code = kOk;
};

// An expected mathematical outcome that stops the pipeline (exit code 2).
struct Obstructed {
  std::string status;
  std::string message;
};

struct Loaded {
  LInftyAlgebra algebra;
  std::optional<LieStructure> lie;
  std::string text;
};

Loaded load_algebra(const std::string& path) {
  Loaded l;
  l.text = io::read_file(path);
  if (io::detect_format(l.text) == "lie") {
    l.lie = io::parse_lie(l.text);
    l.algebra = build_deformation_linfty(*l.lie);
  } else {
    l.algebra = io::parse_algebra(l.text);
  }
  return l;
}

json element_json(const Element& x) {
  const auto& space = *x.space();
  json arr = json::array();
  for (const auto& [g, c] : x.nonzeros()) {
    const Slot s = space.slot(g);
    json e;
    e["slot"] = json::array({s.degree, s.index});
    if (!space.labels(s.degree).empty()) e["label"] = space.label(s);
    e["coeff"] = to_string(c);
    arr.push_back(std::move(e));
  }
  return arr;
}

json float_vector_json(const std::vector<double>& v, const GradedSpace& space) {
  json arr = json::array();
  for (std::size_t g = 0; g < v.size(); ++g) {
    if (v[g] == 0.0) continue;
    const Slot s = space.slot(static_cast<int>(g));
    arr.push_back(json{{"slot", json::array({s.degree, s.index})}, {"value", v[g]}});
  }
  return arr;
}

json matrix_json(const RationalMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_json(const FloatMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json series_json(const FormalSeries& s) {
  json arr = json::array();
  for (const auto& u : s.coeffs) arr.push_back(element_json(u));
  return arr;
}

HomotopyPair degree_one_homotopy(const LInftyAlgebra& alg, const Element& base) {
  return homotopy_operators(twist(alg, base), 1);
}

struct Options {
  std::string file;
  std::string second_file;
  int order = 0;
  double t = 1.0;
  int steps = 1000;
  std::string norm = "max";
  bool strict = false;
  bool oracle = false;
  std::optional<int> degree;
  std::string u1;
  std::string base;
  std::vector<std::string> prefix;
};

void cmd_verify(const Options& o, Report& r) {
  auto l = load_algebra(o.file);
  r.digests.push_back(io::digest(l.text));
  const auto& alg = l.algebra;
  json dims = json::object();
  for (int d : alg.space()->degrees()) dims[std::to_string(d)] = alg.space()->dim(d);
  r.results["dims"] = std::move(dims);
  r.results["strictness"] = alg.strictness();
  r.results["flat"] = alg.is_flat();
  const auto rep = verify_linfty(alg);
  json per_n = json::array();
  for (const auto& [n, v] : rep.max_violation)
    per_n.push_back(json{{"n", n}, {"max_violation", to_string(v)}, {"pass", sgn(v) == 0}});
  r.results["jacobi"] = std::move(per_n);
  r.results["first_failure"] = rep.first_failure ? json(*rep.first_failure) : json(nullptr);
  if (o.strict) {
    const bool canonical = l.lie ? io::serialize_lie(*l.lie) == l.text : io::serialize_algebra(alg) == l.text;
    r.results["canonical_form"] = canonical;
  }
  if (!rep.ok()) throw Obstructed{"fail", "Jacobi identity fails at n = " + std::to_string(*rep.first_failure)};
  r.status = "pass";
}

void cmd_cohomology(const Options& o, Report& r) {
  auto l = load_algebra(o.file);
  r.digests.push_back(io::digest(l.text));
  json dims = json::object();
  std::vector<int> degrees = o.degree ? std::vector<int>{*o.degree} : l.algebra.space()->degrees();
  for (int d : degrees) dims[std::to_string(d)] = cohomology_dim(l.algebra, d);
  r.results["cohomology"] = std::move(dims);
}

void cmd_homotopy(const Options& o, Report& r) {
  auto l = load_algebra(o.file);
  r.digests.push_back(io::digest(l.text));
  const int d = o.degree.value_or(1);
  r.results["degree"] = d;
  const auto h = homotopy_operators(l.algebra, d);
  r.results["h_low"] = matrix_json(h.h_low);
  r.results["h_high"] = matrix_json(h.h_high);
  r.results["identity_exact"] = h.exact();
  r.results["h_low_norm"] = h1_norm(h);
}

void cmd_obstruction(const Options& o, Report& r) {
  auto l = load_algebra(o.file);
  r.digests.push_back(io::digest(l.text));
  if (o.prefix.empty()) throw std::invalid_argument("--prefix must be given at least once (u₀)");
  std::vector<Element> prefix;
  for (const auto& p : o.prefix) prefix.push_back(io::parse_element(p, l.algebra.space()));
  ObstructionReport rep;
  try {
    rep = verify_cocycle(l.algebra, prefix);
  } catch (const DeformationOrderError& e) {
    r.results["failing_order"] = e.order();
    throw Obstructed{"not-a-deformation", e.what()};
  }
  r.results["k"] = rep.k;
  r.results["obstruction"] = element_json(rep.value);
  r.results["is_cocycle"] = rep.is_cocycle;
  r.results["class_zero"] = rep.class_zero ? json(*rep.class_zero) : json(nullptr);
  if (o.oracle) {
    const bool same = obstruction(l.algebra, prefix, CompositionMode::All) == rep.value;
    r.results["oracle_all_compositions"] = same;
    if (!same) throw Obstructed{"oracle-mismatch", "composition readings disagree"};
  }
  if (rep.class_zero && !*rep.class_zero) r.status = "obstructed";
}

void cmd_extend(const Options& o, Report& r) {
  auto l = load_algebra(o.file);
  r.digests.push_back(io::digest(l.text));
  const auto& alg = l.algebra;
  const int K = o.order > 0 ? o.order : 6;
  const Element base = io::parse_element(o.base, alg.space());
  const Element u1 = io::parse_element(o.u1, alg.space());
  const auto h = degree_one_homotopy(alg, base);
  const auto s = extend_formal(alg, h, u1, K, base);
  r.results["order"] = K;
  r.results["coefficients"] = series_json(s);
  if (o.strict) {
    const auto m = taylor_mc(alg, s, K);
    const bool residual = std::all_of(m.begin(), m.end(), [](const Element& x) { return x.is_zero(); });
    bool cocycles = true;
    for (int k = 1; k <= K; ++k) {
      const auto rep = verify_cocycle(alg, std::span(s.coeffs).first(static_cast<std::size_t>(k) + 1));
      cocycles = cocycles && rep.is_cocycle;
    }
    r.results["residual_law"] = residual;
    r.results["cocycle_law"] = cocycles;
    if (!residual || !cocycles) throw Obstructed{"law-violation", "strict check failed"};
  }
  if (o.oracle) {
    const auto all = extend_formal(alg, h, u1, K, base, CompositionMode::All);
    const bool same = all.coeffs == s.coeffs &&
                      taylor_mc(alg, s, K, TaylorRoute::Substitution) == taylor_mc(alg, s, K, TaylorRoute::Obstruction);
    r.results["oracle_agreement"] = same;
    if (!same) throw Obstructed{"oracle-mismatch", "composition readings disagree"};
  }
}

void cmd_deform(const Options& o, Report& r) {
  if (o.norm != "max") throw std::invalid_argument("only --norm max is supported");
  auto l = load_algebra(o.file);
  r.digests.push_back(io::digest(l.text));
  const auto& alg = l.algebra;
  const Element u1 = io::parse_element(o.u1, alg.space());
  const auto h = degree_one_homotopy(alg, Element(alg.space()));
  PsiOptions po;
  po.max_order = o.order > 0 ? o.order : 40;
  po.t = o.t;
  po.mode = o.oracle ? CompositionMode::All : CompositionMode::Representatives;
  PsiResult p;
  try {
    p = psi(alg, h, u1, po);
  } catch (const DivergenceError& e) {
    throw Obstructed{"diverged", e.what()};
  }
  r.results["order"] = p.series.order();
  r.results["t"] = o.t;
  r.results["coefficients"] = series_json(p.series);
  r.results["value"] = float_vector_json(p.value, *alg.space());
  r.results["residual"] = p.residual;
  r.results["terminated"] = p.terminated;
  r.results["tail_estimate"] = std::isfinite(p.tail_estimate) ? json(p.tail_estimate) : json(nullptr);
  r.results["max_decay_ratio"] = p.max_decay_ratio;
  json cert;
  cert["h1_norm"] = p.certificate.h1_norm;
  cert["alpha"] = p.certificate.alpha;
  cert["radius"] = std::isfinite(p.certificate.radius) ? json(p.certificate.radius) : json(nullptr);
  cert["u1_norm"] = p.certificate.u1_norm;
  cert["within_radius"] = p.within_radius;
  cert["bounds_hold"] = p.certificate.ok();
  json rows = json::array();
  for (const auto& row : p.certificate.rows)
    rows.push_back(json{{"k", row.k}, {"computed", row.computed}, {"bound", row.bound}, {"ok", row.ok()}});
  cert["bounds"] = std::move(rows);
  r.results["certificate"] = std::move(cert);
  if (!p.within_radius) r.results["warning"] = "outside the certified radius";
}

void cmd_rigidity(const Options& o, Report& r) {
  const std::string text = io::read_file(o.file);
  r.digests.push_back(io::digest(text));
  const auto mu = io::parse_lie(text);
  const auto rig = rigidity_check(mu);
  r.results["cohomology_dim"] = rig.cohomology_dim;
  r.results["rank_action_derivative"] = rig.rank_action;
  r.results["kernel_jac_derivative"] = rig.kernel_jac;
  r.results["rigid"] = rig.rigid();
  if (rig.homotopy) r.results["homotopy_exact"] = rig.homotopy->exact();
  if (!rig.rigid())
    throw Obstructed{"not-rigid", "H¹ ≠ 0 at the C² slot (dimension " + std::to_string(rig.cohomology_dim) + ")"};
  r.status = "rigid";
}

void cmd_transport(const Options& o, Report& r) {
  const std::string lie_text = io::read_file(o.file);
  const std::string path_text = io::read_file(o.second_file);
  r.digests.push_back(io::digest(lie_text));
  r.digests.push_back(io::digest(path_text));
  const auto mu = io::parse_lie(lie_text);
  const auto path = io::parse_path(path_text, mu);
  const auto rig = rigidity_check(mu);
  if (!rig.rigid())
    throw Obstructed{"not-rigid", "H¹ ≠ 0 at the C² slot (dimension " + std::to_string(rig.cohomology_dim) + ")"};
  TransportResult tr;
  try {
    tr = parallel_transport(path, mu, *rig.homotopy, o.t, o.steps);
  } catch (const std::domain_error& e) {
    throw Obstructed{"outside-neighbourhood", e.what()};
  }
  json samples = json::array();
  const int stride = std::max(1, o.steps / 10);
  for (std::size_t i = 0; i < tr.times.size(); i += static_cast<std::size_t>(stride))
    samples.push_back(json{{"t", tr.times[i]}, {"defect", tr.defect[i]}});
  r.results["steps"] = o.steps;
  r.results["samples"] = std::move(samples);
  r.results["final_transport"] = matrix_json(tr.P.back());
  r.results["final_defect"] = tr.defect.back();
  r.results["max_defect"] = *std::max_element(tr.defect.begin(), tr.defect.end());
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maurer-Cartan deformation toolkit for N-strict L-infinity algebras"};
  app.require_subcommand(1);
  Options o;
  std::function<void(const Options&, Report&)> handler;
  std::string name;
  bool raw_export = false;

  auto add = [&](const char* cmd, const char* help, auto fn) {
    auto* sub = app.add_subcommand(cmd, help);
    sub->callback([&, cmd, fn] {
      name = cmd;
      handler = fn;
    });
    return sub;
  };

  auto* verify = add("verify", "check every Jacobi identity of an algebra or Lie file", cmd_verify);
  verify->add_option("file", o.file)->required();
  verify->add_flag("--strict-check", o.strict, "also report whether the file is in canonical form");

  auto* coh = add("cohomology", "dimensions of the cohomology of ℓ₁", cmd_cohomology);
  coh->add_option("file", o.file)->required();
  coh->add_option("--degree", o.degree);

  auto* hom = add("homotopy", "exact homotopy operators in one degree", cmd_homotopy);
  hom->add_option("file", o.file)->required();
  hom->add_option("--degree", o.degree);

  auto* obs = add("obstruction", "obstruction class of a deformation prefix", cmd_obstruction);
  obs->add_option("file", o.file)->required();
  obs->add_option("--prefix", o.prefix, "u₀, u₁, .. as deg:idx=coeff lists, one per order")->required();
  obs->add_flag("--oracle", o.oracle, "cross-check against the all-compositions sum");

  auto* ext = add("extend", "formal Maurer-Cartan series from u₁", cmd_extend);
  ext->add_option("file", o.file)->required();
  ext->add_option("--u1", o.u1)->required();
  ext->add_option("--base", o.base, "base point u₀ (default 0)");
  ext->add_option("--order", o.order);
  ext->add_flag("--strict-check", o.strict, "verify the residual and cocycle laws exactly");
  ext->add_flag("--oracle", o.oracle, "cross-check against the all-compositions sum");

  auto* def = add("deform", "extend, sum and certify Ψ(u₁)", cmd_deform);
  def->alias("sum");
  def->add_option("file", o.file)->required();
  def->add_option("--u1", o.u1)->required();
  def->add_option("--order", o.order, "series order (default 40)");
  def->add_option("--t", o.t, "evaluation time");
  def->add_option("--norm", o.norm)->check(CLI::IsMember({"max"}));
  def->add_flag("--oracle", o.oracle, "use the all-compositions sum");

  auto* rig = add("rigidity", "infinitesimal rigidity of a Lie structure", cmd_rigidity);
  rig->add_option("file", o.file)->required();

  auto* tr = add("transport", "parallel transport along a deformation path", cmd_transport);
  tr->add_option("lie_file", o.file)->required();
  tr->add_option("path_file", o.second_file)->required();
  tr->add_option("--steps", o.steps)->check(CLI::PositiveNumber);
  tr->add_option("--t", o.t, "final time");

  auto* exp = app.add_subcommand("export-lie", "print the deformation algebra of a Lie file");
  exp->add_option("file", o.file)->required();
  exp->callback([&] { raw_export = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  if (raw_export) {
    try {
      const std::string text = io::read_file(o.file);
      out << io::serialize_algebra(build_deformation_linfty(io::parse_lie(text)));
      return kOk;
    } catch (const std::exception& e) {
      err << "ldeform: " << e.what() << "\n";
      return kInputError;
    }
  }

  Report r;
  r.command = name;
  try {
    handler(o, r);
  } catch (const Obstructed& e) {
    r.status = e.status;
    r.results["message"] = e.message;
    r.code = kObstruction;
  } catch (const CohomologyError& e) {
    r.status = "obstructed";
    r.results["message"] = e.what();
    r.results["cohomology_degree"] = e.degree();
    r.results["cohomology_dim"] = e.dimension();
    r.code = kObstruction;
  } catch (const std::exception& e) {
    r.status = "input-error";
    r.results["message"] = e.what();
    r.code = kInputError;
  }
  json j;
  j["command"] = r.command;
  json digests = json::array();
  for (const auto& d : r.digests) digests.push_back("fnv1a64:" + d);
  j["inputs"] = std::move(digests);
  j["results"] = std::move(r.results);
  j["status"] = r.status;
  out << io::pretty(j);
  if (r.code != kOk) err << "ldeform " << r.command << ": " << j["results"]["message"].get<std::string>() << "\n";
  return r.code;
}

}  // namespace ldeform::cli
