#pragma once

#include <map>
#include <string>
#include <vector>

#include "nrgit/action.hpp"
#include "nrgit/parse.hpp"

namespace nrgit::testing {

// images maps "xi.var" to a polynomial string; unlisted images are zero.
inline DerivationAction make_action(const RingPtr& R, const std::vector<std::string>& relations,
                                    const GradedLieAlgebra& lie, const std::map<std::string, std::string>& images) {
  std::vector<Polynomial> rels;
  for (const auto& r : relations) rels.push_back(parse_polynomial(r, R));
  std::vector<std::vector<Polynomial>> table(lie.dim(), std::vector<Polynomial>(R->nvars(), Polynomial(R)));
  for (const auto& [key, val] : images) {
    auto dot = key.find('.');
    size_t j = *lie.index_of(key.substr(0, dot));
    size_t g = *R->index_of(key.substr(dot + 1));
    table[j][g] = parse_polynomial(val, R);
  }
  return DerivationAction(PresentedAlgebra(R, rels), lie, table);
}

// G_a on Q[x,y] with xi.y = x.
inline DerivationAction gadd_action() {
  RingPtr R = GradedRing::make({"x", "y"}, {0, -1});
  GradedLieAlgebra lie({{1, {"xi"}}});
  return make_action(R, {}, lie, {{"xi.y", "x"}});
}

// Abelian two-level algebra on Q[x,y,z]: xi1 (weight 2) z -> x; xi2 (weight 1)
// z -> y, y -> x.
inline DerivationAction three_var_action() {
  RingPtr R = GradedRing::make({"x", "y", "z"}, {0, -1, -2});
  GradedLieAlgebra lie({{2, {"xi1"}}, {1, {"xi2"}}});
  return make_action(R, {}, lie, {{"xi1.z", "x"}, {"xi2.z", "y"}, {"xi2.y", "x"}});
}

// Weights 3 and 1 on Q[x,y,z,v]: xi2 v -> z -> y -> x, xi1 v -> x.
inline DerivationAction w3_action() {
  RingPtr R = GradedRing::make({"x", "y", "z", "v"}, {0, -1, -2, -3});
  GradedLieAlgebra lie({{3, {"xi1"}}, {1, {"xi2"}}});
  return make_action(R, {}, lie, {{"xi1.v", "x"}, {"xi2.v", "z"}, {"xi2.z", "y"}, {"xi2.y", "x"}});
}

// Heisenberg algebra, basis e1 (weight 2), e2, e3 (weight 1), [e2,e3] = e1.
inline GradedLieAlgebra heisenberg() {
  GradedLieAlgebra lie({{2, {"e1"}}, {1, {"e2", "e3"}}});
  LieElement v = lie.zero();
  v[0] = 1;
  lie.set_bracket(1, 2, v);
  return lie;
}

// Heisenberg acting on Q[x,y1,y2,z]; requires b != a for a faithful centre.
inline DerivationAction heisenberg_action(const std::string& a = "1", const std::string& b = "2") {
  RingPtr R = GradedRing::make({"x", "y1", "y2", "z"}, {0, -1, -1, -2});
  return make_action(R, {}, heisenberg(),
                     {{"e2.y1", "x"}, {"e2.z", a + "*y2"}, {"e3.y2", "x"}, {"e3.z", b + "*y1"},
                      {"e1.z", "(" + b + " - " + a + ")*x"}});
}

}  // namespace nrgit::testing
