#include "fsgl/serialize.hpp"

#include <cmath>
#include <vector>

#include "fsgl/error.hpp"

namespace fsgl {

namespace {

template <class T>
T get(const YAML::Node& node, const char* key) {
  const YAML::Node v = node[key];
  if (!v) throw ConfigError(std::string("missing key '") + key + "'");
  try {
    return v.as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

double get_or(const YAML::Node& node, const char* key, double fallback) {
  return node[key] ? get<double>(node, key) : fallback;
}

std::string family_of(const YAML::Node& node) {
  if (!node.IsMap()) throw ConfigError("expected a mapping with a 'family' key");
  return get<std::string>(node, "family");
}

template <class F>
auto wrap(F&& build) {
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

YAML::Node parse_text(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("YAML parse error: ") + e.what());
  }
}

}  // namespace

std::string emit_yaml(const YAML::Node& node) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << node;
  return std::string(out.c_str()) + "\n";
}

YAML::Node psi_to_node(const PsiFunction& psi) {
  YAML::Node n;
  const auto& rule = psi.rule();
  if (const auto* r = std::get_if<PsiFunction::PowerPole>(&rule)) {
    n["family"] = "power_pole";
    n["a"] = r->a;
    n["b"] = r->b;
    n["A"] = psi.lower();
    n["B"] = psi.upper();
  } else if (const auto* r = std::get_if<PsiFunction::Power>(&rule)) {
    n["family"] = "power";
    n["beta"] = r->beta;
    n["A"] = psi.lower();
    n["B"] = psi.upper();
  } else if (const auto* r = std::get_if<PsiFunction::Degenerate>(&rule)) {
    n["family"] = "degenerate";
    n["r"] = r->r;
    n["value"] = r->value;
  } else if (const auto* r = std::get_if<PsiFunction::Constant>(&rule)) {
    n["family"] = "constant";
    n["value"] = r->value;
    n["A"] = psi.lower();
    n["B"] = psi.upper();
  } else if (const auto* r = std::get_if<PsiFunction::Tabulated>(&rule)) {
    n["family"] = "tabulated";
    n["p"] = r->p;
    n["value"] = r->value;
    n["A"] = psi.lower();
    n["B"] = psi.upper();
  } else {
    throw ConfigError("callable psi functions cannot be serialised");
  }
  return n;
}

PsiFunction psi_from_node(const YAML::Node& node) {
  const std::string family = family_of(node);
  return wrap([&] {
    const double nan = std::nan("");
    if (family == "power_pole")
      return PsiFunction::power_pole(get<double>(node, "a"), get<double>(node, "b"), get<double>(node, "A"),
                                     get<double>(node, "B"));
    if (family == "power")
      return PsiFunction::power(get<double>(node, "beta"), get_or(node, "A", 1.0), get_or(node, "B", kInfinity));
    if (family == "degenerate") return PsiFunction::degenerate(get<double>(node, "r"), get_or(node, "value", 1.0));
    if (family == "constant")
      return PsiFunction::constant(get<double>(node, "value"), get<double>(node, "A"), get<double>(node, "B"));
    if (family == "tabulated")
      return PsiFunction::tabulated(get<std::vector<double>>(node, "p"), get<std::vector<double>>(node, "value"),
                                    get_or(node, "A", nan), get_or(node, "B", nan));
    throw ConfigError("unknown psi family '" + family + "'");
  });
}

std::string psi_to_yaml(const PsiFunction& psi) { return emit_yaml(psi_to_node(psi)); }
PsiFunction psi_from_yaml(const std::string& text) { return psi_from_node(parse_text(text)); }

YAML::Node young_to_node(const YoungFunction& phi) {
  YAML::Node n;
  const auto& rule = phi.rule();
  if (const auto* r = std::get_if<YoungFunction::Power>(&rule)) {
    n["family"] = "power";
    n["exponent"] = r->exponent;
  } else if (const auto* r = std::get_if<YoungFunction::Exponential>(&rule)) {
    n["family"] = "exponential";
    n["m"] = r->m;
  } else if (const auto* r = std::get_if<YoungFunction::ExpOfMu>(&rule)) {
    n["family"] = "exp_of_mu";
    n["u"] = r->u;
    n["mu"] = r->mu;
    n["patch_radius"] = r->patch_radius;
  } else {
    const auto& t = std::get<YoungFunction::Tabulated>(rule);
    n["family"] = "tabulated";
    n["u"] = t.u;
    n["phi"] = t.phi;
  }
  return n;
}

YoungFunction young_from_node(const YAML::Node& node) {
  const std::string family = family_of(node);
  return wrap([&] {
    if (family == "power") return YoungFunction::power(get<double>(node, "exponent"));
    if (family == "exponential") return YoungFunction::exponential(get<double>(node, "m"));
    if (family == "exp_of_mu")
      return YoungFunction::exp_of_mu(get<std::vector<double>>(node, "u"), get<std::vector<double>>(node, "mu"),
                                      get_or(node, "patch_radius", 3.0));
    if (family == "tabulated")
      return YoungFunction::tabulated(get<std::vector<double>>(node, "u"), get<std::vector<double>>(node, "phi"),
                                      1.0);
    throw ConfigError("unknown Young family '" + family + "'");
  });
}

std::string young_to_yaml(const YoungFunction& phi) { return emit_yaml(young_to_node(phi)); }
YoungFunction young_from_yaml(const std::string& text) { return young_from_node(parse_text(text)); }

}  // namespace fsgl
