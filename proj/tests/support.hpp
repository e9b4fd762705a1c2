#pragma once

#include <random>
#include <string>
#include <vector>

#include "nrgit/parse.hpp"
#include "nrgit/polynomial.hpp"

namespace nrgit::testing {

inline Polynomial P(const std::string& s, const RingPtr& r) { return parse_polynomial(s, r); }

// Random polynomial with small integer coefficients.
inline Polynomial random_poly(std::mt19937& rng, const RingPtr& r, int max_deg, int max_terms, int coeff = 3) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> cdist(-coeff, coeff);
  std::uniform_int_distribution<int> vdist(0, static_cast<int>(r->nvars()) - 1);
  std::uniform_int_distribution<int> ddist(0, max_deg);
  std::vector<Polynomial::Term> ts;
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    Exponents e(r->nvars(), 0);
    int d = ddist(rng);
    for (int k = 0; k < d; ++k) e[vdist(rng)] += 1;
    int c = cdist(rng);
    if (c == 0) c = 1;
    ts.emplace_back(e, c);
  }
  return Polynomial::from_terms(r, ts);
}

}  // namespace nrgit::testing
