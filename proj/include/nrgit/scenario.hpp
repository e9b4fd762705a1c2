#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nrgit/action.hpp"
#include "nrgit/parse.hpp"

namespace nrgit {

// A syntactically valid scenario that violates an algebraic invariant.
struct ScenarioError : ParseError {
  std::string kind;
  ScenarioError(const std::string& k, const std::string& msg, size_t l, size_t c)
      : ParseError(msg, l, c), kind(k) {}
};

struct ScenarioOptions {
  int degree_bound = 4;
  int pbw_bound = 3;
  bool reduced = true;
  size_t sample_count = 200;
  uint64_t seed = 0;
  bool operator==(const ScenarioOptions&) const = default;
};

struct Scenario {
  RingPtr ring;
  std::vector<Polynomial> relations;
  GradedLieAlgebra lie;
  std::vector<std::vector<Polynomial>> table;  // table[j][g] = xi_j . x_g
  ScenarioOptions options;

  DerivationAction action() const;
  bool operator==(const Scenario& o) const;
};

// Sectioned text: [ring], [relations], [lie], [action], [options].
// Throws ParseError (syntax) or ScenarioError (semantics), both located.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& s);

}  // namespace nrgit
