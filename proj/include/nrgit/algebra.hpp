#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nrgit/groebner.hpp"

namespace nrgit {

// A = k[variables] / relations. Elements handed out by reduce() are normal
// forms, so equality in A is coefficient comparison.
class PresentedAlgebra {
 public:
  PresentedAlgebra() = default;
  explicit PresentedAlgebra(RingPtr r, std::vector<Polynomial> relations = {})
      : ring_(r), relations_(r, std::move(relations)) {}
  PresentedAlgebra(RingPtr r, Ideal relations) : ring_(std::move(r)), relations_(std::move(relations)) {}

  const RingPtr& ring() const { return ring_; }
  const Ideal& relations() const { return relations_; }
  size_t ngens() const { return ring_->nvars(); }

  Polynomial reduce(const Polynomial& p) const { return relations_.normal_form(p); }
  Polynomial var(size_t i) const { return reduce(Polynomial::variable(ring_, i)); }
  Polynomial constant(const Rational& c) const { return reduce(Polynomial::constant(ring_, c)); }
  Polynomial zero() const { return Polynomial(ring_); }
  bool is_zero(const Polynomial& p) const { return reduce(p).is_zero(); }
  bool equal(const Polynomial& p, const Polynomial& q) const { return reduce(p - q).is_zero(); }
  bool is_zero_ring() const { return relations_.is_unit(); }

  // Ideal of A given by generators, as an ideal of the ambient ring
  // containing the relations.
  Ideal ideal(const std::vector<Polynomial>& gens) const {
    std::vector<Polynomial> all = relations_.groebner_basis();
    for (const auto& g : gens) all.push_back(g);
    return Ideal(ring_, all);
  }

  // Every relation generator is lambda-homogeneous up to the ideal.
  bool relations_homogeneous() const {
    for (const auto& g : relations_.generators())
      for (const auto& [w, part] : weight_decompose(g))
        if (!relations_.contains(part)) return false;
    return true;
  }

  // Standard monomials (not in the leading ideal) of a given weight and total
  // degree <= max_degree, ordered by degree then monomial order.
  std::vector<Exponents> standard_monomials(int weight, int max_degree) const {
    const auto& gb = relations_.groebner_basis();
    const size_t n = ring_->nvars();
    std::vector<Exponents> out;
    Exponents e(n, 0);
    std::function<void(size_t, int, int)> rec = [&](size_t i, int deg_left, int w) {
      if (i == n) {
        if (w != weight) return;
        for (const auto& g : gb)
          if (divides(g.lead_exp(), e)) return;
        out.push_back(e);
        return;
      }
      for (int k = 0; k <= deg_left; ++k) {
        e[i] = k;
        rec(i + 1, deg_left - k, w + k * ring_->weight(i));
      }
      e[i] = 0;
    };
    rec(0, max_degree, 0);
    const auto& ord = ring_->order();
    std::stable_sort(out.begin(), out.end(), [&](const Exponents& a, const Exponents& b) {
      int da = total_degree(a), db = total_degree(b);
      if (da != db) return da < db;
      return ord.compare(a, b) < 0;
    });
    return out;
  }

 private:
  RingPtr ring_;
  Ideal relations_;
};

}  // namespace nrgit
