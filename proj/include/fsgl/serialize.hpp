#pragma once

#include <string>

#include <yaml-cpp/yaml.h>

#include "fsgl/psi.hpp"
#include "fsgl/young.hpp"

namespace fsgl {

// Psi and Young functions as YAML mappings: a `family` tag plus parameters,
// or node arrays for tabulated rules. Numbers are written with 17 significant
// digits so that a round trip reproduces every double exactly; infinite
// supports are written as .inf.
//
//   family: power_pole   a, b, A, B
//   family: power        beta, A, B
//   family: degenerate   r, value
//   family: constant     value, A, B
//   family: tabulated    p: [...], value: [...], A, B
//
//   family: power        exponent
//   family: exponential  m
//   family: exp_of_mu    u: [...], mu: [...], patch_radius
//   family: tabulated    u: [...], phi: [...]
//
// Callable psi rules are not serialisable. Malformed documents raise
// ConfigError.

YAML::Node psi_to_node(const PsiFunction& psi);
PsiFunction psi_from_node(const YAML::Node& node);
std::string psi_to_yaml(const PsiFunction& psi);
PsiFunction psi_from_yaml(const std::string& text);

YAML::Node young_to_node(const YoungFunction& phi);
YoungFunction young_from_node(const YAML::Node& node);
std::string young_to_yaml(const YoungFunction& phi);
YoungFunction young_from_yaml(const std::string& text);

/// Emits a node with full double precision.
std::string emit_yaml(const YAML::Node& node);

}  // namespace fsgl
