#include "cosob/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "cosob/acceptance.hpp"
#include "cosob/error.hpp"
#include "cosob/multinorms.hpp"

namespace cosob {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) fail(where, "unknown field '" + key + "'");
}

const json& required(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) fail(where, "missing field '" + key + "'");
  return obj.at(key);
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

int get_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

Vector get_vector(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "expected a nonempty array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = get_number(v[i], where);
  return out;
}

struct Context {
  std::map<std::string, ManifoldSpec> manifolds;
  std::map<std::string, ExampleFamily> families;
  std::optional<QuadratureSpec> quadrature;
};

ManifoldSpec parse_manifold(const json& v, const Context& ctx, const std::string& where) {
  if (v.is_string()) {
    const auto it = ctx.manifolds.find(v.get<std::string>());
    if (it == ctx.manifolds.end()) fail(where, "unknown manifold '" + v.get<std::string>() + "'");
    return it->second;
  }
  check_keys(v, {"kind", "n", "radius", "factors"}, where);
  const std::string kind = get_string(required(v, "kind", where), where + ".kind");
  ManifoldSpec s;
  if (kind == "euclidean") {
    s.kind = ManifoldSpec::Kind::Euclidean;
  } else if (kind == "circle") {
    s.kind = ManifoldSpec::Kind::Circle;
  } else if (kind == "sphere") {
    s.kind = ManifoldSpec::Kind::Sphere;
  } else if (kind == "product") {
    s.kind = ManifoldSpec::Kind::Product;
  } else {
    fail(where, "unknown manifold kind '" + kind + "'");
  }
  if (v.contains("n")) s.n = get_int(v["n"], where + ".n");
  if (v.contains("radius")) s.radius = get_number(v["radius"], where + ".radius");
  if (v.contains("factors")) {
    if (s.kind != ManifoldSpec::Kind::Product || !v["factors"].is_array()) fail(where, "factors need kind 'product'");
    for (std::size_t i = 0; i < v["factors"].size(); ++i)
      s.factors.push_back(parse_manifold(v["factors"][i], ctx, where + ".factors[" + std::to_string(i) + "]"));
  }
  make_manifold(s);  // validates ranges
  return s;
}

ExampleFamily parse_family_spec(const json& v, const Context& ctx, const std::string& where) {
  if (v.is_string()) {
    const auto it = ctx.families.find(v.get<std::string>());
    if (it == ctx.families.end()) fail(where, "unknown family '" + v.get<std::string>() + "'");
    return it->second;
  }
  check_keys(v, {"family", "alpha", "beta", "ell", "m", "target"}, where);
  ExampleFamily f;
  f.id = parse_family(get_string(required(v, "family", where), where + ".family"));
  if (v.contains("alpha")) f.alpha = get_number(v["alpha"], where + ".alpha");
  if (v.contains("beta")) f.beta = get_number(v["beta"], where + ".beta");
  if (v.contains("ell")) f.ell = get_number(v["ell"], where + ".ell");
  if (v.contains("m")) f.m = get_int(v["m"], where + ".m");
  if (v.contains("target")) f.target = parse_manifold(v["target"], ctx, where + ".target");
  make_example(f);  // validates ranges
  return f;
}

QuadratureSpec parse_quadrature(const json& v, const std::string& where) {
  check_keys(v, {"domain", "r", "r_in", "n_annuli", "radial_nodes", "angular_nodes"}, where);
  QuadratureSpec q;
  if (v.contains("domain")) {
    const std::string d = get_string(v["domain"], where + ".domain");
    if (d == "ball") {
      q.kind = DomainKind::Ball;
    } else if (d == "annulus") {
      q.kind = DomainKind::Annulus;
    } else if (d == "sphere") {
      q.kind = DomainKind::Sphere;
    } else if (d == "circle") {
      q.kind = DomainKind::Circle;
    } else {
      fail(where, "unknown domain '" + d + "'");
    }
  }
  if (v.contains("r")) q.r = get_number(v["r"], where + ".r");
  if (v.contains("r_in")) q.r_in = get_number(v["r_in"], where + ".r_in");
  if (v.contains("n_annuli")) q.n_annuli = get_int(v["n_annuli"], where + ".n_annuli");
  if (v.contains("radial_nodes")) q.radial_nodes = get_int(v["radial_nodes"], where + ".radial_nodes");
  if (v.contains("angular_nodes")) q.angular_nodes = get_int(v["angular_nodes"], where + ".angular_nodes");
  try {
    q.validate();
  } catch (const ConfigError& e) {
    fail(where, e.what());
  }
  return q;
}

const std::map<std::string, AnalysisKind> kKinds{
    {"energy", AnalysisKind::Energy},
    {"chainrule", AnalysisKind::ChainRule},
    {"oscillation", AnalysisKind::Oscillation},
    {"gn_ratio", AnalysisKind::GnRatio},
    {"validity_window", AnalysisKind::ValidityWindow},
    {"norm_compose", AnalysisKind::NormCompose},
    {"criterion", AnalysisKind::Criterion},
};

const std::map<std::string, WindowPurpose> kPurposes{
    {"default", WindowPurpose::Default},
    {"chain_rule_failure", WindowPurpose::ChainRuleFailure},
    {"strict_inclusion", WindowPurpose::StrictInclusion},
    {"third_order_failure", WindowPurpose::ThirdOrderFailure},
    {"uniform_integrability", WindowPurpose::UniformIntegrability},
};

Analysis parse_analysis(const json& v, const Context& ctx, const std::string& where) {
  if (!v.is_object()) fail(where, "expected an object");
  const std::string kind_name = get_string(required(v, "kind", where), where + ".kind");
  const auto kit = kKinds.find(kind_name);
  if (kit == kKinds.end()) fail(where, "unknown analysis kind '" + kind_name + "'");
  Analysis a;
  a.kind = kit->second;
  std::set<std::string> allowed{"id", "kind", "expect"};
  switch (a.kind) {
    case AnalysisKind::Energy:
      allowed.insert({"family", "order", "exponent", "quadrature", "sublevel", "value", "tolerance"});
      break;
    case AnalysisKind::ChainRule:
      allowed.insert({"family", "order", "quadrature", "sublevel"});
      break;
    case AnalysisKind::Oscillation:
      allowed.insert({"family", "quadrature", "samples", "value", "tolerance"});
      break;
    case AnalysisKind::GnRatio:
      allowed.insert({"family", "k", "j", "p", "quadrature"});
      break;
    case AnalysisKind::ValidityWindow:
      allowed.insert({"family", "p", "purpose"});
      break;
    case AnalysisKind::NormCompose:
      allowed.insert({"samples", "seed"});
      break;
    case AnalysisKind::Criterion:
      allowed.insert({"criterion"});
      break;
  }
  check_keys(v, allowed, where);
  a.id = get_string(required(v, "id", where), where + ".id");
  a.expect = get_string(required(v, "expect", where), where + ".expect");
  if (v.contains("family")) a.family = parse_family_spec(v["family"], ctx, where + ".family");
  const bool needs_family = a.kind != AnalysisKind::NormCompose && a.kind != AnalysisKind::Criterion;
  if (needs_family && !a.family) fail(where, "missing field 'family'");
  if (v.contains("quadrature")) {
    a.quadrature = parse_quadrature(v["quadrature"], where + ".quadrature");
  } else if (ctx.quadrature) {
    a.quadrature = ctx.quadrature;
  }
  if (v.contains("sublevel")) {
    const json& s = v["sublevel"];
    check_keys(s, {"lo", "hi"}, where + ".sublevel");
    Sublevel L{get_vector(required(s, "lo", where), where + ".sublevel.lo"),
               get_vector(required(s, "hi", where), where + ".sublevel.hi")};
    if (L.lo.size() != L.hi.size()) fail(where, "sublevel bounds differ in length");
    if (a.family && L.lo.size() != example_target(*a.family).ambient_dim())
      fail(where, "sublevel bounds must match the target's ambient dimension");
    a.sublevel = L;
  }
  if (v.contains("order")) a.order = get_int(v["order"], where + ".order");
  if (v.contains("exponent")) a.exponent = get_number(v["exponent"], where + ".exponent");
  if (v.contains("k")) a.order = get_int(v["k"], where + ".k");
  if (v.contains("j")) a.lower_order = get_int(v["j"], where + ".j");
  if (v.contains("p")) a.exponent = get_number(v["p"], where + ".p");
  if (v.contains("samples")) a.samples = get_int(v["samples"], where + ".samples");
  if (v.contains("seed")) {
    if (!v["seed"].is_number_unsigned()) fail(where, "seed must be a nonnegative integer");
    a.seed = v["seed"].get<std::uint64_t>();
  }
  if (v.contains("criterion")) a.criterion = get_int(v["criterion"], where + ".criterion");
  if (v.contains("value")) a.value = get_number(v["value"], where + ".value");
  if (v.contains("tolerance")) a.tolerance = get_number(v["tolerance"], where + ".tolerance");
  if (v.contains("purpose")) {
    const auto pit = kPurposes.find(get_string(v["purpose"], where + ".purpose"));
    if (pit == kPurposes.end()) fail(where, "unknown purpose");
    a.purpose = pit->second;
  }

  // Ranges and expectations.
  if (a.value.has_value() != a.tolerance.has_value()) fail(where, "'value' and 'tolerance' go together");
  if (a.tolerance && !(*a.tolerance > 0.0)) fail(where, "tolerance must be positive");
  if (a.samples < 1) fail(where, "samples must be positive");
  auto expect_one_of = [&](std::initializer_list<const char*> options) {
    for (const char* o : options)
      if (a.expect == o) return;
    fail(where, "unsupported expectation '" + a.expect + "'");
  };
  switch (a.kind) {
    case AnalysisKind::Energy:
      if (a.order < 1 || a.order > 4) fail(where, "order must be in 1..4");
      if (!(a.exponent >= 1.0)) fail(where, "exponent must be at least 1");
      expect_one_of({"finite", "divergent", "inconclusive"});
      break;
    case AnalysisKind::ChainRule:
      if (a.order < 1 || a.order > 3) fail(where, "order must be in 1..3");
      expect_one_of({"finite", "divergent", "inconclusive"});
      break;
    case AnalysisKind::Oscillation:
      expect_one_of({"value"});
      if (!a.value) fail(where, "oscillation needs 'value' and 'tolerance'");
      break;
    case AnalysisKind::GnRatio:
      if (!(1 <= a.lower_order && a.lower_order < a.order && a.order <= 4)) fail(where, "requires 1 <= j < k <= 4");
      if (!(a.exponent >= 1.0)) fail(where, "p must be at least 1");
      expect_one_of({"finite", "infinite", "inconclusive"});
      break;
    case AnalysisKind::ValidityWindow:
      if (!v.contains("p")) a.exponent = 1.0;
      expect_one_of({"satisfied", "violated", "empty"});
      break;
    case AnalysisKind::NormCompose:
      expect_one_of({"pass"});
      break;
    case AnalysisKind::Criterion:
      if (a.criterion < 1 || a.criterion > kCriterionCount) fail(where, "criterion must be in 1..14");
      expect_one_of({"pass", "fail"});
      break;
  }
  if ((a.kind == AnalysisKind::Energy || a.kind == AnalysisKind::ChainRule || a.kind == AnalysisKind::Oscillation ||
       a.kind == AnalysisKind::GnRatio) &&
      !a.quadrature)
    fail(where, "missing field 'quadrature' (and no scenario default)");
  return a;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  check_keys(doc, {"schema", "id", "description", "manifolds", "families", "quadrature", "analyses", "output"},
             "scenario");
  const json& schema = required(doc, "schema", "scenario");
  if (!schema.is_number_integer() || schema.get<int>() != kScenarioSchema)
    fail("scenario", "unsupported schema (expected 1)");
  Scenario s;
  s.id = get_string(required(doc, "id", "scenario"), "scenario.id");
  if (s.id.empty() || s.id.find_first_of("/\\,\"") != std::string::npos) fail("scenario.id", "invalid identifier");
  if (doc.contains("description")) s.description = get_string(doc["description"], "scenario.description");

  Context ctx;
  if (doc.contains("manifolds")) {
    if (!doc["manifolds"].is_object()) fail("scenario.manifolds", "expected an object");
    for (const auto& [name, spec] : doc["manifolds"].items())
      ctx.manifolds[name] = parse_manifold(spec, ctx, "manifolds." + name);
  }
  if (doc.contains("families")) {
    if (!doc["families"].is_object()) fail("scenario.families", "expected an object");
    for (const auto& [name, spec] : doc["families"].items())
      ctx.families[name] = parse_family_spec(spec, ctx, "families." + name);
  }
  if (doc.contains("quadrature")) ctx.quadrature = parse_quadrature(doc["quadrature"], "scenario.quadrature");
  const json& analyses = required(doc, "analyses", "scenario");
  if (!analyses.is_array()) fail("scenario.analyses", "expected an array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < analyses.size(); ++i) {
    Analysis a = parse_analysis(analyses[i], ctx, "analyses[" + std::to_string(i) + "]");
    if (!ids.insert(a.id).second) fail("analyses[" + std::to_string(i) + "]", "duplicate id '" + a.id + "'");
    s.analyses.push_back(std::move(a));
  }
  if (doc.contains("output")) {
    check_keys(doc["output"], {"dir"}, "scenario.output");
    if (doc["output"].contains("dir")) s.output_dir = get_string(doc["output"]["dir"], "scenario.output.dir");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

namespace {

std::string family_label(const Analysis& a) { return a.family ? family_name(a.family->id) : ""; }
std::string params_label(const Analysis& a) { return a.family ? family_params(*a.family) : ""; }

ojson energy_detail(const EnergyReport& e) { return ojson::parse(e.to_json()); }

ReportRow evaluate(const Analysis& a, const RunOptions& opts) {
  ReportRow row;
  row.check_id = a.id;
  row.family = family_label(a);
  row.params = params_label(a);
  row.expected = a.expect;
  ojson detail;
  detail["kind"] = [&] {
    for (const auto& [name, kind] : kKinds)
      if (kind == a.kind) return name;
    return std::string();
  }();
  std::optional<QuadratureSpec> q = a.quadrature;
  if (q) q->threads = opts.threads;

  switch (a.kind) {
    case AnalysisKind::Energy:
    case AnalysisKind::ChainRule: {
      const SmoothMap u = make_example(*a.family);
      const EnergyReport e = a.kind == AnalysisKind::Energy ? energy(u, a.order, a.exponent, *q, a.sublevel)
                                                            : chainrule_integral(u, a.order, *q, a.sublevel);
      row.order = std::to_string(a.order);
      row.exponent = a.kind == AnalysisKind::Energy ? num(a.exponent) : "1";
      row.value = num(e.value);
      row.classification = classification_name(e.classification);
      row.pass = row.classification == a.expect;
      if (a.value) {
        const bool close = std::abs(e.value - *a.value) <= *a.tolerance;
        row.pass = row.pass && close;
        row.expected += ";value=" + num(*a.value) + "+-" + num(*a.tolerance);
      }
      detail["report"] = energy_detail(e);
      break;
    }
    case AnalysisKind::Oscillation: {
      const SmoothMap u = make_example(*a.family);
      const double osc = oscillation(u, *q, a.samples);
      row.value = num(osc);
      row.classification = "value";
      row.expected = "value=" + num(*a.value) + "+-" + num(*a.tolerance);
      row.pass = std::abs(osc - *a.value) <= *a.tolerance;
      detail["samples"] = a.samples;
      break;
    }
    case AnalysisKind::GnRatio: {
      const SmoothMap u = make_example(*a.family);
      const GnRatio g = gn_ratio(u, a.order, a.lower_order, a.exponent, *q);
      row.params += ";j=" + std::to_string(a.lower_order);
      row.order = std::to_string(a.order);
      row.exponent = num(a.exponent);
      row.value = num(g.ratio);
      row.classification = gn_status_name(g.status);
      row.pass = row.classification == a.expect;
      detail["lhs"] = num(g.lhs);
      detail["rhs"] = num(g.rhs);
      detail["osc"] = num(g.osc);
      detail["lhs_report"] = energy_detail(g.lhs_energy);
      detail["rhs_report"] = energy_detail(g.rhs_energy);
      break;
    }
    case AnalysisKind::ValidityWindow: {
      const ValidityReport rep = validity_window(*a.family, a.exponent, a.purpose);
      bool empty = false;
      ojson windows = ojson::array();
      for (const auto& w : rep.windows) {
        empty = empty || w.empty;
        ojson jw;
        jw["name"] = w.name;
        jw["variable"] = w.variable;
        jw["lo"] = num(w.lo);
        jw["hi"] = num(w.hi);
        jw["value"] = num(w.value);
        jw["empty"] = w.empty;
        jw["satisfied"] = w.satisfied;
        windows.push_back(jw);
      }
      row.exponent = num(a.exponent);
      row.classification = empty ? "empty" : rep.all_satisfied() ? "satisfied" : "violated";
      row.pass = row.classification == a.expect;
      detail["windows"] = windows;
      break;
    }
    case AnalysisKind::NormCompose: {
      const NormComposeSummary sum = norm_compose_check(a.samples, a.seed);
      row.value = num(sum.worst_ratio);
      row.classification = sum.violations == 0 ? "pass" : "fail";
      row.pass = row.classification == a.expect;
      detail["pairs"] = sum.pairs;
      detail["violations"] = sum.violations;
      break;
    }
    case AnalysisKind::Criterion: {
      AcceptanceOptions ao;
      ao.threads = opts.threads;
      if (a.criterion == kCriterionCount) {
        const AcceptanceReport rep = run_acceptance(ao);
        const CriterionResult& c = rep.criteria.back();
        row.classification = c.pass ? "pass" : "fail";
        detail["observed"] = c.observed;
      } else {
        std::vector<GnRow> table;
        const CriterionResult c = run_criterion(a.criterion, ao, &table);
        row.classification = c.pass ? "pass" : "fail";
        detail["name"] = c.name;
        detail["expected"] = c.expected;
        detail["observed"] = c.observed;
        detail["tolerance"] = c.tolerance;
      }
      row.order = std::to_string(a.criterion);
      row.pass = row.classification == a.expect;
      break;
    }
  }
  row.detail_json = detail.dump();
  return row;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string csv_header() {
  return "scenario_id,check_id,family,params,order,exponent,value,classification,expected,verdict,runtime_ms";
}

ScenarioReport run_scenario(const Scenario& s, const RunOptions& opts) {
  using Clock = std::chrono::steady_clock;
  ScenarioReport rep;
  rep.scenario_id = s.id;
  for (const auto& a : s.analyses) {
    const auto start = Clock::now();
    ReportRow row = evaluate(a, opts);
    row.scenario_id = s.id;
    row.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

bool ScenarioReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

std::string ScenarioReport::to_csv(bool timing) const {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) {
    char ms[32] = "";
    if (timing) std::snprintf(ms, sizeof ms, "%.3f", r.runtime_ms);
    for (const std::string* f : {&r.scenario_id, &r.check_id, &r.family, &r.params, &r.order, &r.exponent, &r.value,
                                 &r.classification, &r.expected})
      out += csv_field(*f) + ",";
    out += std::string(r.pass ? "PASS" : "FAIL") + "," + ms + "\n";
  }
  return out;
}

std::string ScenarioReport::to_json(bool timing) const {
  ojson j;
  j["schema"] = kScenarioSchema;
  j["scenario_id"] = scenario_id;
  ojson arr = ojson::array();
  for (const auto& r : rows) {
    ojson o;
    o["check_id"] = r.check_id;
    o["family"] = r.family;
    o["params"] = r.params;
    o["order"] = r.order;
    o["exponent"] = r.exponent;
    o["value"] = r.value;
    o["classification"] = r.classification;
    o["expected"] = r.expected;
    o["verdict"] = r.pass ? "PASS" : "FAIL";
    if (timing) o["runtime_ms"] = r.runtime_ms;
    o["detail"] = ojson::parse(r.detail_json);
    arr.push_back(o);
  }
  j["analyses"] = arr;
  j["all_pass"] = all_pass();
  return j.dump(2) + "\n";
}

}  // namespace cosob
