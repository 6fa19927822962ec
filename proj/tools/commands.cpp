#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fsgl/certificates.hpp"
#include "fsgl/error.hpp"
#include "fsgl/expression.hpp"
#include "fsgl/grid_function.hpp"
#include "fsgl/norms.hpp"
#include "fsgl/psi.hpp"
#include "fsgl/random_fields.hpp"
#include "fsgl/report.hpp"
#include "fsgl/serialize.hpp"
#include "fsgl/young.hpp"

namespace fsgl::cli {

using nlohmann::json;

// ---------------------------------------------------------------- config

YAML::Node Config::at(const std::string& key) const {
  const YAML::Node v = node_[key];
  if (!v) throw ConfigError("missing configuration key '" + key + "'");
  return v;
}

bool Config::has(const std::string& key) const {
  const YAML::Node v = node_[key];
  return v && !v.IsNull();
}

namespace {

double scalar_number(const YAML::Node& v, const std::string& key) {
  if (!v.IsScalar()) throw ConfigError("'" + key + "' must be a number");
  try {
    return v.as<double>();
  } catch (const YAML::Exception&) {
  }
  const Expression e = Expression::parse(v.Scalar());
  if (e.arity() != 0) throw ConfigError("'" + key + "' must be a constant expression");
  return e(std::span<const double>{});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

double Config::number(const std::string& key) const { return scalar_number(at(key), key); }

int Config::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError("'" + key + "' must be an integer");
  return static_cast<int>(v);
}

bool Config::flag(const std::string& key) const {
  try {
    return at(key).as<bool>();
  } catch (const YAML::Exception&) {
    throw ConfigError("'" + key + "' must be true or false");
  }
}

std::string Config::text(const std::string& key) const {
  const YAML::Node v = at(key);
  if (!v.IsScalar()) throw ConfigError("'" + key + "' must be a string");
  return v.Scalar();
}

std::vector<double> Config::numbers(const std::string& key) const {
  const YAML::Node v = at(key);
  if (v.IsScalar()) return {scalar_number(v, key)};
  if (!v.IsSequence()) throw ConfigError("'" + key + "' must be a number or a list of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(scalar_number(e, key));
  return out;
}

std::vector<std::vector<double>> Config::number_lists(const std::string& key) const {
  const YAML::Node v = at(key);
  if (!v.IsSequence()) throw ConfigError("'" + key + "' must be a list of lists");
  std::vector<std::vector<double>> out;
  for (const auto& row : v) {
    if (!row.IsSequence()) throw ConfigError("'" + key + "' must be a list of lists");
    std::vector<double> r;
    for (const auto& e : row) r.push_back(scalar_number(e, key));
    out.push_back(std::move(r));
  }
  return out;
}

Config Config::sub(const std::string& key) const {
  const YAML::Node v = at(key);
  if (!v.IsMap()) throw ConfigError("'" + key + "' must be a mapping");
  return Config(v);
}

YAML::Node merge_config(const YAML::Node& defaults, const YAML::Node& user, const std::string& where) {
  YAML::Node out = YAML::Clone(defaults);
  if (!user || user.IsNull()) return out;
  if (!user.IsMap()) throw ConfigError("configuration" + (where.empty() ? "" : " '" + where + "'") + " must be a mapping");
  for (const auto& kv : user) {
    const std::string key = kv.first.as<std::string>();
    const std::string path = where.empty() ? key : where + "." + key;
    const YAML::Node def = defaults[key];
    if (!def) throw ConfigError("unknown configuration key '" + path + "'");
    // Nested option blocks merge key by key; psi / Young specs are replaced.
    const bool block = def.IsMap() && !def["family"];
    out[key] = block ? merge_config(def, kv.second, path) : YAML::Clone(kv.second);
  }
  return out;
}

json yaml_to_json(const YAML::Node& node) {
  if (!node || node.IsNull()) return nullptr;
  if (node.IsSequence()) {
    json a = json::array();
    for (const auto& e : node) a.push_back(yaml_to_json(e));
    return a;
  }
  if (node.IsMap()) {
    json o = json::object();
    for (const auto& kv : node) o[kv.first.as<std::string>()] = yaml_to_json(kv.second);
    return o;
  }
  const std::string s = node.Scalar();
  if (node.Tag() != "!") {
    try {
      const double d = node.as<double>();
      return json_number(d);
    } catch (const YAML::Exception&) {
    }
    if (s == "true" || s == "false") return s == "true";
  }
  return s;
}

// ---------------------------------------------------------------- parsing helpers

namespace {

struct FunctionSpec {
  Expression expr;
  int d;
  int n;
};

FunctionSpec function_spec(const Config& c) {
  FunctionSpec s{Expression::parse(c.text("function")), c.integer("dimension"), c.integer("n")};
  if (s.d < 1 || s.d > 3) throw ConfigError("dimension must be 1, 2 or 3");
  if (s.expr.arity() > s.d)
    throw ConfigError("function '" + s.expr.text() + "' uses more coordinates than the dimension");
  if (s.n < 2) throw ConfigError("n must be at least 2");
  return s;
}

GridFunction sample(const FunctionSpec& s) { return sample_function(s.expr.as_point_function(), s.d, s.n); }

PsiFunction psi_spec(const Config& c, const std::string& key) {
  const YAML::Node v = c.node()[key];
  if (!v || !v.IsMap()) throw ConfigError("'" + key + "' must be a psi mapping");
  return psi_from_node(v);
}

bool psi_is_natural(const Config& c) {
  const YAML::Node v = c.node()["psi"];
  return v && v.IsScalar() && v.Scalar() == "natural";
}

std::vector<double> positive_list(const Config& c, const std::string& key) {
  auto v = c.numbers(key);
  if (v.empty()) throw ConfigError("'" + key + "' must not be empty");
  for (double x : v)
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("'" + key + "' entries must be positive and finite");
  return v;
}

std::vector<std::vector<double>> product_grid(const std::vector<std::vector<double>>& axes) {
  std::vector<std::vector<double>> cells{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& c : cells)
      for (double v : axis) {
        auto e = c;
        e.push_back(v);
        next.push_back(std::move(e));
      }
    cells = std::move(next);
  }
  return cells;
}

RandomFieldModel model_spec(const Config& c, const CommonOptions& o) {
  const Config m = c.sub("model");
  RandomFieldModel model;
  model.kind = field_kind_from_string(m.text("kind"));
  model.hurst = m.number("hurst");
  // The sheet default is bounded by the rectangle-modulus table.
  model.n = m.has("n") ? m.integer("n") : (model.dim() == 1 ? (1 << 14) + 1 : 64);
  model.seed = static_cast<std::uint64_t>(m.number("seed"));
  if (o.seed) model.seed = *o.seed;
  try {
    model.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  return model;
}

McConfig mc_spec(const Config& c, const CommonOptions& o) {
  const Config m = c.sub("mc");
  McConfig mc;
  mc.paths = m.integer("paths");
  mc.batches = m.integer("batches");
  mc.positions = m.integer("positions");
  mc.heavy_tail_rse = m.number("heavy_tail_rse");
  mc.workers = o.workers ? *o.workers : m.integer("workers");
  try {
    mc.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("mc: ") + e.what());
  }
  return mc;
}

std::vector<std::vector<double>> field_deltas(const Config& c, int d) {
  if (d == 1) {
    std::vector<std::vector<double>> cells;
    for (double v : positive_list(c, "delta")) cells.push_back({v});
    return cells;
  }
  auto axes = c.number_lists("delta_axis");
  if (static_cast<int>(axes.size()) != d) throw ConfigError("delta_axis needs one list per axis");
  return product_grid(axes);
}

json certificate_json(const ContinuityCertificate& cert) {
  json j;
  j["theorem"] = cert.theorem;
  j["alpha"] = json_numbers(cert.alpha);
  j["psi"] = cert.psi_label;
  j["norm"] = json_number(cert.norm);
  j["norm_p_grid"] = json_numbers(cert.norm_p_grid);
  j["tolerance"] = cert.tolerance;
  j["min_slack"] = json_number(cert.min_slack());
  j["all_hold"] = cert.all_hold();
  for (const auto& [k, v] : cert.constants) j["constants"][k] = json_number(v);
  for (const auto& [k, v] : cert.notes) j["notes"][k] = v;
  return j;
}

std::string certificate_csv(const ContinuityCertificate& cert) {
  std::vector<std::string> cols;
  const std::size_t d = cert.delta.empty() ? 1 : cert.delta[0].size();
  for (std::size_t k = 0; k < d; ++k) cols.push_back(d == 1 ? "delta" : "delta" + std::to_string(k + 1));
  for (const char* c : {"measured", "bound", "slack", "holds"}) cols.push_back(c);
  if (!cert.extra_name.empty()) cols.push_back(cert.extra_name);
  CsvTable t(cols);
  for (std::size_t i = 0; i < cert.delta.size(); ++i) {
    std::vector<CsvTable::Cell> r;
    for (double v : cert.delta[i]) r.push_back(v);
    r.push_back(cert.measured[i]);
    r.push_back(cert.bound[i]);
    r.push_back(cert.slack[i]);
    r.push_back(static_cast<long long>(cert.holds[i]));
    if (!cert.extra_name.empty()) r.push_back(cert.extra[i]);
    t.row(std::move(r));
  }
  return t.str();
}

CommandResult certificate_result(const char* name, const ContinuityCertificate& cert) {
  CommandResult r;
  r.pass = cert.all_hold();
  const auto held = std::count(cert.holds.begin(), cert.holds.end(), true);
  r.summary = std::string(name) + ": " + (r.pass ? "PASS" : "FAIL") + " (" + std::to_string(held) + "/" +
              std::to_string(cert.holds.size()) + " cells hold, min slack " + fmt(cert.min_slack()) + ")";
  r.csv = certificate_csv(cert);
  r.json["certificate"] = certificate_json(cert);
  return r;
}

PsiFunction natural_psi(const GridFunction& f, const FractionalIndex& alpha, const Config& c,
                        const SeminormConfig& sc) {
  const auto p_grid = c.has("p_grid") ? c.numbers("p_grid") : default_p_grid(alpha, sc);
  const NaturalZeta z = zeta_natural(f, alpha, p_grid, sc);
  if (z.degenerate || !z.psi) throw DomainError("f has no natural psi function (its seminorm vanishes)");
  return *z.psi;
}

// ---------------------------------------------------------------- commands

CommandResult run_seminorm(const Config& c, const CommonOptions&) {
  const FunctionSpec fs = function_spec(c);
  const auto alpha = c.numbers("alpha");
  const auto ps = positive_list(c, "p");
  const std::string route = c.text("route");
  if (route != "grid" && route != "callable") throw ConfigError("route must be 'grid' or 'callable'");
  if (route == "callable" && fs.d != 1) throw ConfigError("the callable route is one-dimensional");
  const FractionalIndex a = alpha.size() == 1 ? FractionalIndex::uniform(alpha[0], fs.d) : FractionalIndex(alpha);
  if (a.dim() != fs.d) throw ConfigError("alpha needs one entry per dimension");
  const bool check = c.has("expected");
  const double expected = check ? c.number("expected") : 0.0;
  const double tol = c.number("tolerance");

  const GridFunction f = sample(fs);
  CsvTable t({"p", "value", "status", "tail_fraction", "tail_exponent"});
  CommandResult r;
  r.json["rows"] = json::array();
  double worst = 0.0;
  for (double p : ps) {
    SeminormResult s;
    if (route == "callable") {
      const Expression e = fs.expr;
      s = gagliardo_seminorm_1d([e](double x) { return e(x); }, a.alpha[0], p);
    } else {
      s = fs.d == 1 ? gagliardo_seminorm_1d(f, a.alpha[0], p) : gagliardo_seminorm_nd(f, a, p);
    }
    t.row({p, s.value, to_string(s.status), s.tail_fraction, s.tail_exponent});
    r.json["rows"].push_back({{"p", p},
                              {"value", json_number(s.value)},
                              {"status", to_string(s.status)},
                              {"tail_fraction", json_number(s.tail_fraction)}});
    if (check) worst = std::max(worst, std::abs(s.value / expected - 1.0));
  }
  r.csv = t.str();
  r.pass = !check || worst <= tol;
  r.json["max_relative_error"] = check ? json_number(worst) : json(nullptr);
  r.summary = std::string("seminorm: ") + (r.pass ? "PASS" : "FAIL") +
              (check ? " (max relative error " + fmt(worst) + ", tolerance " + fmt(tol) + ")"
                     : " (" + std::to_string(ps.size()) + " exponents)");
  return r;
}

CommandResult run_glnorm(const Config& c, const CommonOptions&) {
  const FunctionSpec fs = function_spec(c);
  const PsiFunction psi = psi_spec(c, "psi");
  const auto table_p = positive_list(c, "p_table");
  const GridFunction f = sample(fs);
  const GrandLebesgueResult g = grand_lebesgue_norm(f, psi);
  CsvTable t({"p", "lp_norm", "psi", "ratio"});
  for (double p : table_p) {
    const double lp = lp_norm(f, p), w = psi(p);
    t.row({p, lp, w, lp / w});
  }
  CommandResult r;
  r.csv = t.str();
  bool ok = std::isfinite(g.value);
  std::string detail = "norm " + fmt(g.value) + " at p=" + fmt(g.argmax_p);
  if (const auto* d = std::get_if<PsiFunction::Degenerate>(&psi.rule())) {
    const double ref = lp_norm(f, d->r) / d->value;
    const double err = std::abs(g.value - ref) / std::max(ref, 1e-300);
    ok = ok && err <= 1e-9;
    detail += ", |f|_r/value relative difference " + fmt(err);
    r.json["degenerate_reference"] = json_number(ref);
  }
  r.pass = ok;
  r.json["norm"] = json_number(g.value);
  r.json["argmax_p"] = json_number(g.argmax_p);
  r.json["divergent_at_upper"] = g.divergent_at_upper;
  r.summary = std::string("glnorm: ") + (ok ? "PASS" : "FAIL") + " (" + detail + ")";
  return r;
}

CommandResult run_fundamental(const Config& c, const CommonOptions&) {
  const PsiFunction psi = psi_spec(c, "psi");
  auto delta = positive_list(c, "delta");
  std::sort(delta.begin(), delta.end());
  const bool truncated = c.has("q");
  const double q = truncated ? c.number("q") : 0.0;
  std::vector<std::string> cols{"delta", "phi", "argmax_p"};
  if (truncated) cols.push_back("phi_q");
  CsvTable t(cols);
  std::vector<double> phis;
  for (double d : delta) {
    const FundamentalValue v = fundamental_function_argmax(psi, d);
    std::vector<CsvTable::Cell> row{d, v.value, v.argmax_p};
    if (truncated) row.push_back(truncated_fundamental_function(psi, q, d));
    t.row(std::move(row));
    phis.push_back(v.value);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < phis.size(); ++i) monotone = monotone && phis[i] >= phis[i - 1] * (1 - 1e-12);
  CommandResult r;
  r.csv = t.str();
  r.pass = monotone;
  const double slope = delta.size() >= 2 ? fit_loglog_slope(delta, phis) : std::nan("");
  r.json["loglog_slope"] = json_number(slope);
  r.json["monotone"] = monotone;
  r.summary = std::string("fundamental: ") + (monotone ? "PASS" : "FAIL") + " (phi non-decreasing: " +
              (monotone ? "yes" : "no") + ", log-log slope " + fmt(slope) + ")";
  return r;
}

CertificateConfig certificate_config(const Config& c) {
  CertificateConfig cc;
  cc.tolerance = c.number("tolerance");
  if (!(cc.tolerance >= 0.0)) throw ConfigError("tolerance must be non-negative");
  return cc;
}

CommandResult run_certify_1d(const Config& c, const CommonOptions&) {
  FunctionSpec fs = function_spec(c);
  if (fs.d != 1) throw ConfigError("certify-1d needs dimension 1");
  const double alpha = c.number("alpha");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0,1]");
  const auto delta = positive_list(c, "delta");
  const CertificateConfig cc = certificate_config(c);
  const bool natural = psi_is_natural(c);
  std::optional<PsiFunction> given;
  if (!natural) given = psi_spec(c, "psi");
  const GridFunction f = sample(fs);
  const PsiFunction psi = natural ? natural_psi(f, FractionalIndex::uniform(alpha, 1), c, cc.seminorm) : *given;
  return certificate_result("certify-1d", certify_theorem_2_1(f, alpha, psi, delta, cc));
}

CommandResult run_certify_nd(const Config& c, const CommonOptions&) {
  const FunctionSpec fs = function_spec(c);
  const auto alpha = c.numbers("alpha");
  const FractionalIndex a = alpha.size() == 1 ? FractionalIndex::uniform(alpha[0], fs.d) : FractionalIndex(alpha);
  if (a.dim() != fs.d) throw ConfigError("alpha needs one entry per dimension");
  const auto axes = c.number_lists("delta_axis");
  if (static_cast<int>(axes.size()) != fs.d) throw ConfigError("delta_axis needs one list per axis");
  const CertificateConfig cc = certificate_config(c);
  const bool natural = psi_is_natural(c);
  std::optional<PsiFunction> given;
  if (!natural) given = psi_spec(c, "psi");
  const GridFunction f = sample(fs);
  const PsiFunction psi = natural ? natural_psi(f, a, c, cc.seminorm) : *given;
  return certificate_result("certify-nd", certify_theorem_3_1(f, a, psi, product_grid(axes), cc));
}

CommandResult run_exactness(const Config& c, const CommonOptions&) {
  const double alpha = c.number("alpha"), p = c.number("p");
  const auto delta = positive_list(c, "delta");
  auto Delta = positive_list(c, "Delta");
  const int n = c.integer("n");
  const double floor = c.number("v_floor"), target = c.number("v_target");
  if (!(alpha > 0.0 && alpha <= 1.0) || !(p > 1.0 / alpha))
    throw ConfigError("exactness needs alpha in (0,1] and p > 1/alpha");
  const double hi = 1.0 - alpha + 1.0 / p;
  for (double D : Delta)
    if (!(D > 0.0 && D < hi))
      throw ConfigError("Delta=" + fmt(D) + " outside the admissible range (0, 1 - alpha + 1/p) = (0, " + fmt(hi) + ")");

  const ExactnessTable tab = exactness_experiment(alpha, p, delta, Delta, n);
  CsvTable t({"Delta", "delta", "omega", "bound", "V"});
  bool floor_ok = true;
  for (const auto& row : tab.rows) {
    t.row({row.Delta, row.delta, row.omega, row.bound, row.V});
    floor_ok = floor_ok && row.V >= floor;
  }
  // At the smallest delta, V must decrease as Delta decreases and end near 1.
  const double dmin = *std::min_element(delta.begin(), delta.end());
  std::vector<std::pair<double, double>> at_min;
  for (const auto& row : tab.rows)
    if (row.delta == dmin) at_min.push_back({row.Delta, row.V});
  std::sort(at_min.begin(), at_min.end(), [](auto x, auto y) { return x.first > y.first; });
  bool monotone = true;
  for (std::size_t i = 1; i < at_min.size(); ++i) monotone = monotone && at_min[i].second < at_min[i - 1].second;
  const bool target_ok = !at_min.empty() && at_min.back().second <= target;

  CommandResult r;
  r.csv = t.str();
  r.pass = floor_ok && monotone && target_ok;
  r.json["checks"] = {{"v_floor", floor_ok}, {"monotone_at_smallest_delta", monotone}, {"v_target", target_ok}};
  for (const auto& [D, w] : tab.seminorm) r.json["seminorm"][fmt(D)] = json_number(w);
  r.summary = std::string("exactness: ") + (r.pass ? "PASS" : "FAIL") + " (V >= " + fmt(floor) + ": " +
              (floor_ok ? "yes" : "no") + ", monotone at delta=" + fmt(dmin) + ": " + (monotone ? "yes" : "no") +
              ", final V " + (at_min.empty() ? "n/a" : fmt(at_min.back().second)) + " <= " + fmt(target) + ": " +
              (target_ok ? "yes" : "no") + ")";
  return r;
}

CommandResult run_scaling(const Config& c, const CommonOptions&) {
  const Expression e = Expression::parse(c.text("function"));
  if (e.arity() > 1) throw ConfigError("scaling takes a function of x");
  const double alpha = c.number("alpha"), p = c.number("p");
  const auto lambda = positive_list(c, "lambda");
  const int n = c.integer("n");
  const auto band = c.numbers("ratio_band");
  const double slope_tol = c.number("slope_tolerance");
  if (band.size() != 2 || !(band[0] < band[1])) throw ConfigError("ratio_band must be [low, high]");
  for (double l : lambda)
    if (l > 1.0) throw ConfigError("lambda must lie in (0,1]");

  const ScalingTable tab = scaling_experiment([e](double x) { return e(x); }, alpha, p, lambda, n);
  CsvTable t({"lambda", "norm", "expected", "ratio"});
  bool band_ok = true;
  for (const auto& row : tab.rows) {
    t.row({row.lambda, row.norm, row.expected, row.ratio});
    band_ok = band_ok && row.ratio >= band[0] && row.ratio <= band[1];
  }
  const double expect = alpha - 1.0 / p;
  const bool slope_ok = std::abs(tab.fitted_slope - expect) <= slope_tol;
  CommandResult r;
  r.csv = t.str();
  r.pass = band_ok && slope_ok;
  r.json["base_norm"] = json_number(tab.base_norm);
  r.json["fitted_slope"] = json_number(tab.fitted_slope);
  r.json["expected_slope"] = expect;
  r.summary = std::string("scaling: ") + (r.pass ? "PASS" : "FAIL") + " (ratios in band: " +
              (band_ok ? "yes" : "no") + ", slope " + fmt(tab.fitted_slope) + " vs " + fmt(expect) + ")";
  return r;
}

CommandResult run_orlicz_roundtrip(const Config& c, const CommonOptions&) {
  const PsiFunction psi = psi_spec(c, "psi");
  const YAML::Node yn = c.node()["young"];
  if (!yn || !yn.IsMap()) throw ConfigError("'young' must be a Young-function mapping");
  const YoungFunction N = young_from_node(yn);
  const auto range = c.numbers("p_range");
  if (range.size() != 2 || !(range[0] >= 1.0 && range[0] < range[1])) throw ConfigError("p_range must be [lo, hi]");
  const double band = c.number("band");
  if (!(band >= 1.0)) throw ConfigError("band must be at least 1");
  const int samples = c.integer("samples");
  if (samples < 2) throw ConfigError("samples must be at least 2");

  PsiOrliczConfig oc;
  const YoungFunction N_psi = orlicz_from_psi(psi, oc);
  OrliczPsiConfig pc = default_orlicz_psi_config();
  const PsiFunction psi_back = psi_from_orlicz(N_psi, pc);
  const PsiFunction psi_N = psi_from_orlicz(N, pc);
  const auto* expo = std::get_if<YoungFunction::Exponential>(&N.rule());

  CsvTable t({"p", "psi", "psi_roundtrip", "roundtrip_ratio", "psi_of_young", "young_reference_ratio"});
  double lo1 = kInfinity, hi1 = 0, lo2 = kInfinity, hi2 = 0;
  for (int i = 0; i < samples; ++i) {
    const double p = range[0] * std::pow(range[1] / range[0], double(i) / (samples - 1));
    const double r1 = psi_back(p) / psi(p);
    const double ref = expo ? std::pow(p, 1.0 / expo->m) : std::nan("");
    const double r2 = psi_N(p) / ref;
    lo1 = std::min(lo1, r1);
    hi1 = std::max(hi1, r1);
    if (expo) {
      lo2 = std::min(lo2, r2);
      hi2 = std::max(hi2, r2);
    }
    t.row({p, psi(p), psi_back(p), r1, psi_N(p), r2});
  }
  const bool ok1 = lo1 >= 1.0 / band && hi1 <= band;
  const bool ok2 = !expo || (lo2 >= 1.0 / band && hi2 <= band);
  CommandResult r;
  r.csv = t.str();
  r.pass = ok1 && ok2;
  r.json["roundtrip_band"] = {json_number(lo1), json_number(hi1)};
  if (expo) r.json["young_band"] = {json_number(lo2), json_number(hi2)};
  r.json["orlicz_of_psi"] = yaml_to_json(young_to_node(N_psi));
  r.summary = std::string("orlicz-roundtrip: ") + (r.pass ? "PASS" : "FAIL") + " (round-trip ratio in [" +
              fmt(lo1) + ", " + fmt(hi1) + "]" +
              (expo ? ", psi_N / p^{1/m} in [" + fmt(lo2) + ", " + fmt(hi2) + "]" : std::string()) +
              ", band " + fmt(band) + ")";
  return r;
}

json theta_json(const ThetaResult& th) {
  json j;
  j["p"] = json_numbers(th.p);
  j["value"] = json_numbers(th.value);
  j["divergent"] = th.divergent;
  j["heavy_tail"] = th.heavy_tail;
  j["truncated"] = th.truncated;
  return j;
}

void dump_paths(const Config& c, const RandomFieldModel& model, CommandResult& r, const std::string& prefix) {
  const int k = c.integer("dump_paths");
  if (k <= 0) return;
  const PathSampler sampler(model);
  for (int i = 0; i < k; ++i)
    r.extra_files.push_back({prefix + "_path_" + std::to_string(i) + ".csv", write_grid_csv(sampler(std::uint64_t(i)))});
}

CommandResult run_field_thm41(const Config& c, const CommonOptions& o) {
  const RandomFieldModel model = model_spec(c, o);
  const McConfig mc = mc_spec(c, o);
  const auto alpha = c.numbers("alpha");
  const FractionalIndex a =
      alpha.size() == 1 ? FractionalIndex::uniform(alpha[0], model.dim()) : FractionalIndex(alpha);
  if (a.dim() != model.dim()) throw ConfigError("alpha needs one entry per field dimension");
  const auto p_grid = positive_list(c, "p_grid");
  const auto cells = field_deltas(c, model.dim());
  const double need = c.number("min_holding_fraction");

  const Thm41Report rep = thm41_experiment(model, a, cells, p_grid, mc);
  std::vector<std::string> cols;
  for (int k = 0; k < model.dim(); ++k) cols.push_back(model.dim() == 1 ? "delta" : "delta" + std::to_string(k + 1));
  for (const char* s : {"moment", "standard_error", "bound", "slack", "holds"}) cols.push_back(s);
  CsvTable t(cols);
  for (const auto& row : rep.rows) {
    std::vector<CsvTable::Cell> r;
    for (double v : row.delta) r.push_back(v);
    r.push_back(row.moment.value);
    r.push_back(row.moment.standard_error);
    r.push_back(row.bound);
    r.push_back(row.slack);
    r.push_back(static_cast<long long>(row.holds));
    t.row(std::move(r));
  }
  const double frac = double(rep.holding_cells()) / rep.rows.size();
  CommandResult r;
  r.csv = t.str();
  r.pass = frac >= need;
  r.json["A"] = rep.A;
  r.json["theta"] = theta_json(rep.theta);
  r.json["bound_slope"] = json_number(rep.bound_slope);
  double sum_alpha = 0;
  for (double x : a.alpha) sum_alpha += x;
  r.json["reference_slopes"] = {{"alpha_minus_inverse_A", sum_alpha / a.dim() - 1.0 / rep.A},
                                {"alpha", sum_alpha / a.dim()}};
  r.json["holding_fraction"] = frac;
  dump_paths(c, model, r, "field-thm41");
  r.summary = std::string("field-thm41: ") + (r.pass ? "PASS" : "FAIL") + " (" +
              std::to_string(rep.holding_cells()) + "/" + std::to_string(rep.rows.size()) +
              " cells hold, A=" + fmt(rep.A) + ", bound slope " + fmt(rep.bound_slope) + ")";
  return r;
}

Thm42Params field_params(const RandomFieldModel& model, double Delta) {
  Thm42Params p = brownian_thm42_params(Delta);
  const double H = model.kind == FieldKind::fractional_brownian_motion ? model.hurst : 0.5;
  const double beta = p.alpha_exp * H - 1.0;
  if (!(beta > 0.0))
    throw ConfigError("Delta=" + fmt(Delta) + " gives a non-positive beta for Hurst index " + fmt(H));
  p.beta.assign(model.dim(), beta);
  return p;
}

CommandResult run_field_thm42(const Config& c, const CommonOptions& o) {
  const RandomFieldModel model = model_spec(c, o);
  const McConfig mc = mc_spec(c, o);
  const auto Deltas = positive_list(c, "Delta");
  const auto cells = field_deltas(c, model.dim());
  for (const auto& cell : cells)
    for (double v : cell)
      if (v > std::exp(-1.0)) throw ConfigError("field-thm42 deltas must not exceed 1/e");
  const double spread_limit = c.number("spread_limit");
  const double tol_exp = c.number("moment_exponent_tolerance");
  const double tol_pre = c.number("moment_prefactor_tolerance");
  std::vector<Thm42Params> params;
  for (double D : Deltas) params.push_back(field_params(model, D));

  // Fourth-moment scaling of the increments.
  const PathSampler sampler(model);
  const int steps = sampler.lattice_size() - 1;
  std::vector<std::vector<int>> gaps;
  for (int g = 1; g <= steps / 16; g *= 2) gaps.push_back(std::vector<int>(model.dim(), g));
  const GapMoments gm = mc_gap_moments(model, {4.0}, gaps, mc, 3);
  std::vector<double> u, m4;
  for (std::size_t g = 0; g < gaps.size(); ++g) {
    u.push_back(gaps[g][0] * gm.h);
    m4.push_back(gm.est[g][0].value);
  }
  const double H = model.kind == FieldKind::fractional_brownian_motion ? model.hurst : 0.5;
  const double exp_expected = 4.0 * H * model.dim();
  const double exponent = fit_loglog_slope(u, m4);
  double intercept = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) intercept += (std::log(m4[i]) - exponent * std::log(u[i])) / u.size();
  const double prefactor = std::exp(intercept);
  const bool moment_ok = std::abs(exponent - exp_expected) <= tol_exp && std::abs(prefactor - 3.0) <= tol_pre;

  const ModulusSamples ms = sample_moduli(model, cells, mc, 1);
  std::vector<std::string> cols{"Delta"};
  for (int k = 0; k < model.dim(); ++k) cols.push_back(model.dim() == 1 ? "delta" : "delta" + std::to_string(k + 1));
  for (const char* s : {"mean_R", "min_R", "max_R"}) cols.push_back(s);
  CsvTable t(cols);
  CommandResult r;
  bool spread_ok = true, floor_ok = true;
  r.json["runs"] = json::array();
  std::string exps;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Thm42Report rep = thm42_experiment(model, params[i], cells, mc, &ms);
    for (std::size_t k = 0; k < cells.size(); ++k) {
      std::vector<CsvTable::Cell> row{Deltas[i]};
      for (double v : cells[k]) row.push_back(v);
      row.push_back(rep.mean_R[k]);
      row.push_back(rep.min_R[k]);
      row.push_back(rep.max_R[k]);
      t.row(std::move(row));
    }
    spread_ok = spread_ok && rep.spread < spread_limit;
    if (model.dim() == 1) floor_ok = floor_ok && rep.exactness_floor > 0.0;
    exps += (i ? ", " : "") + fmt(rep.normalizer_exponent[0]);
    r.json["runs"].push_back({{"Delta", Deltas[i]},
                              {"alpha", params[i].alpha_exp},
                              {"beta", json_numbers(params[i].beta)},
                              {"K", params[i].K},
                              {"normalizer_exponent", json_numbers(rep.normalizer_exponent)},
                              {"precondition_gap", json_numbers(rep.precondition_gap)},
                              {"precondition_ratio", json_numbers(rep.precondition_ratio)},
                              {"precondition_se", json_numbers(rep.precondition_se)},
                              {"spread", json_number(rep.spread)},
                              {"fitted_C", json_number(rep.fitted_C)},
                              {"exactness_floor", json_number(rep.exactness_floor)}});
  }
  r.csv = t.str();
  r.pass = spread_ok && floor_ok && moment_ok;
  r.json["fourth_moment"] = {{"exponent", exponent},
                             {"expected_exponent", exp_expected},
                             {"prefactor", prefactor},
                             {"expected_prefactor", 3.0}};
  dump_paths(c, model, r, "field-thm42");
  r.summary = std::string("field-thm42: ") + (r.pass ? "PASS" : "FAIL") + " (normalizer exponents " + exps +
              "; R spread < " + fmt(spread_limit) + ": " + (spread_ok ? "yes" : "no") + "; fourth moment exponent " +
              fmt(exponent) + ", prefactor " + fmt(prefactor) + ")";
  return r;
}

CommandResult run_field_tails(const Config& c, const CommonOptions& o) {
  const RandomFieldModel model = model_spec(c, o);
  const McConfig mc = mc_spec(c, o);
  const auto alpha = c.numbers("alpha");
  const FractionalIndex a =
      alpha.size() == 1 ? FractionalIndex::uniform(alpha[0], model.dim()) : FractionalIndex(alpha);
  if (a.dim() != model.dim()) throw ConfigError("alpha needs one entry per field dimension");
  const double q = c.number("q");
  const auto delta = positive_list(c, "delta");
  if (static_cast<int>(delta.size()) != model.dim()) throw ConfigError("delta needs one entry per field dimension");
  const auto z = positive_list(c, "z");
  const auto p_grid = positive_list(c, "p_grid");

  const TailReport rep = tail_report(model, a, q, delta, z, p_grid, mc);
  CsvTable t({"z", "empirical", "binomial_se", "bound", "applied", "valid"});
  bool ok = true;
  for (const auto& row : rep.rows) {
    t.row({row.z, row.empirical, row.binomial_se, row.bound, static_cast<long long>(row.applied),
           static_cast<long long>(row.valid)});
    ok = ok && row.valid;
  }
  CommandResult r;
  r.csv = t.str();
  r.pass = ok;
  r.json["theta"] = theta_json(rep.theta);
  r.json["q"] = q;
  r.summary = std::string("field-tails: ") + (ok ? "PASS" : "FAIL") + " (" + std::to_string(rep.rows.size()) +
              " thresholds, exceedance within bound + 3 SE: " + (ok ? "yes" : "no") + ")";
  return r;
}

CommandResult run_distance_axioms(const Config& c, const CommonOptions& o) {
  const FunctionSpec fs = function_spec(c);
  const int trials = c.integer("trials");
  const bool exhaustive = c.flag("exhaustive");
  if (trials < 0) throw ConfigError("trials must be non-negative");
  const std::uint64_t seed = o.seed ? *o.seed : static_cast<std::uint64_t>(c.number("seed"));
  const GridFunction f = sample(fs);
  DistanceReport rep = exhaustive ? rectangle_distance_exhaustive(f) : rectangle_distance_check(f, trials, seed);
  CsvTable t({"property", "x", "y", "z", "lhs", "rhs"});
  auto idx = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
  };
  for (const auto& v : rep.violations)
    t.row({std::string(1, v.property), idx(v.x), idx(v.y), idx(v.z), v.lhs, v.rhs});
  CommandResult r;
  r.csv = t.str();
  r.pass = rep.violated_a == 0 && rep.violated_b == 0;
  r.json["trials"] = rep.trials;
  r.json["violations"] = {{"a", rep.violated_a}, {"b", rep.violated_b}, {"c", rep.violated_c}};
  r.summary = std::string("distance-axioms: ") + (r.pass ? "PASS" : "FAIL") + " (" + std::to_string(rep.trials) +
              " trials; violations a=" + std::to_string(rep.violated_a) + " b=" + std::to_string(rep.violated_b) +
              " c=" + std::to_string(rep.violated_c) + ", the triangle inequality is reported, not required)";
  return r;
}

// ---------------------------------------------------------------- defaults

constexpr const char* kDeltaDyadic8 = "[0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625]";

const std::string kSeminorm = R"yaml(function: "x"
dimension: 1
n: 4097
alpha: 0.5
p: 4
route: grid
expected: 0.7598356856515925
tolerance: 1.0e-3
)yaml";

const std::string kGlnorm = R"yaml(function: "sin(3*x) + x"
dimension: 1
n: 4097
psi: {family: power, beta: 0.5, A: 1, B: .inf}
p_table: [1, 2, 4, 8, 16, 32]
)yaml";

const std::string kFundamental = R"yaml(psi: {family: power_pole, a: 1, b: 1, A: 2, B: 4}
delta: [1.0e-6, 1.0e-5, 1.0e-4, 1.0e-3, 1.0e-2]
q: ~
)yaml";

const std::string kCertify1d = std::string(R"yaml(function: "x^0.6"
dimension: 1
n: 4097
alpha: 0.5
psi: natural
p_grid: ~
tolerance: 0.02
delta: )yaml") + kDeltaDyadic8 + "\n";

const std::string kCertifyNd = R"yaml(function: "x1^0.8 * sin(2*x2)"
dimension: 2
n: 64
alpha: [0.5, 0.5]
psi: natural
p_grid: [2.5, 3, 4, 6, 8, 12, 16]
tolerance: 0.02
delta_axis: [[0.5, 0.25, 0.125, 0.0625, 0.03125], [0.5, 0.25, 0.125, 0.0625, 0.03125]]
)yaml";

const std::string kExactness = R"yaml(alpha: 0.5
p: 4
n: 4097
delta: ["2^-1", "2^-2", "2^-3", "2^-4", "2^-5", "2^-6", "2^-7", "2^-8", "2^-9", "2^-10"]
Delta: [0.2, 0.1, 0.05]
v_floor: 0.98
v_target: 1.05
)yaml";

const std::string kScaling = R"yaml(function: "x^2"
alpha: 0.5
p: 4
n: 2049
lambda: [1, 0.5, 0.25]
ratio_band: [0.99, 1.01]
slope_tolerance: 0.01
)yaml";

const std::string kOrlicz = R"yaml(psi: {family: power, beta: 0.5, A: 1, B: .inf}
young: {family: exponential, m: 2}
p_range: [2, 100]
samples: 50
band: 4
)yaml";

const std::string kModelMc = R"yaml(model:
  kind: brownian_motion
  hurst: 0.5
  n: ~
  seed: 1
mc:
  paths: 10000
  batches: 20
  positions: 64
  heavy_tail_rse: 0.5
  workers: 1
dump_paths: 0
)yaml";

const std::string kThm41 = kModelMc + R"yaml(alpha: 0.4
p_grid: [2.75, 3, 3.5, 4, 5, 6, 8, 10, 12, 16]
delta: [0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125]
delta_axis: ~
min_holding_fraction: 0.99
)yaml";

const std::string kThm42 = kModelMc + R"yaml(Delta: [1, 3, 7]
delta: ["2^-14", "2^-13", "2^-12", "2^-11", "2^-10", "2^-9", "2^-8", "2^-7", "2^-6", "2^-5", "2^-4"]
delta_axis: ~
spread_limit: 10
moment_exponent_tolerance: 0.05
moment_prefactor_tolerance: 0.15
)yaml";

const std::string kTails = kModelMc + R"yaml(alpha: 0.4
q: 4
delta: [0.0625]
z: [0.5, 1, 2, 4, 8, 16, 32, 64, 128, 256]
p_grid: [2.75, 3, 3.5, 4, 5, 6, 8, 10, 12, 16]
)yaml";

const std::string kDistance = R"yaml(function: "x1 * x2"
dimension: 2
n: 9
trials: 100000
exhaustive: false
seed: 1
)yaml";

}  // namespace

const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> list = {
      {"seminorm", "Gagliardo seminorm of a function", kSeminorm.c_str(), run_seminorm},
      {"glnorm", "Grand Lebesgue norm of a function", kGlnorm.c_str(), run_glnorm},
      {"fundamental", "fundamental function of a psi", kFundamental.c_str(), run_fundamental},
      {"certify-1d", "one-dimensional continuity certificate", kCertify1d.c_str(), run_certify_1d},
      {"certify-nd", "rectangle-modulus certificate", kCertifyNd.c_str(), run_certify_nd},
      {"exactness", "exactness of the modulus bound on power functions", kExactness.c_str(), run_exactness},
      {"scaling", "dilation test of the half-line seminorm", kScaling.c_str(), run_scaling},
      {"orlicz-roundtrip", "psi <-> Orlicz function round trips", kOrlicz.c_str(), run_orlicz_roundtrip},
      {"field-thm41", "moment bound on the modulus of a random field", kThm41.c_str(), run_field_thm41},
      {"field-thm42", "logarithmic modulus normaliser for a random field", kThm42.c_str(), run_field_thm42},
      {"field-tails", "tail bound for the normalised modulus", kTails.c_str(), run_field_tails},
      {"distance-axioms", "metric axioms of the rectangle difference", kDistance.c_str(), run_distance_axioms},
  };
  return list;
}

}  // namespace fsgl::cli
