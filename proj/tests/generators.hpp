#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "nrgit/quotient.hpp"
#include "fixtures.hpp"
#include "support.hpp"

namespace nrgit::testing {

// Coordinate derivations d/dv_i conjugated by a random triangular automorphism
// sigma(v_k) = v_k + h_k(v_1..v_{k-1}); slices are sigma(v_i).
inline CommutingSlices random_dixmier_instance(std::mt19937& rng, size_t n, size_t r) {
  std::vector<std::string> names;
  for (size_t k = 0; k < n; ++k) names.push_back("v" + std::to_string(k + 1));
  RingPtr R = GradedRing::make(names, std::vector<int>(n, 0));
  std::uniform_int_distribution<int> deg(1, 2), nterm(1, 2);
  std::vector<Polynomial> sigma, inv;
  for (size_t k = 0; k < n; ++k) {
    Polynomial h(R);
    if (k > 0) {
      RingPtr sub = GradedRing::make(std::vector<std::string>(names.begin(), names.begin() + static_cast<long>(k)),
                                     std::vector<int>(k, 0));
      std::vector<size_t> map(k);
      for (size_t j = 0; j < k; ++j) map[j] = j;
      h = random_poly(rng, sub, deg(rng), nterm(rng), 2).embed(R, map);
    }
    sigma.push_back(Polynomial::variable(R, k) + h);
    inv.push_back(Polynomial::variable(R, k) - h.substitute(R, inv.empty() ? std::vector<Polynomial>{} : inv));
  }
  std::vector<size_t> idx(n);
  for (size_t k = 0; k < n; ++k) idx[k] = k;
  std::shuffle(idx.begin(), idx.end(), rng);
  CommutingSlices cs{PresentedAlgebra(R), {}, {}};
  for (size_t a = 0; a < r; ++a) {
    size_t i = idx[a];
    std::vector<Polynomial> images;
    for (size_t k = 0; k < n; ++k) images.push_back(inv[k].partial(i).substitute(R, sigma));
    cs.derivations.push_back(images);
    cs.slices.push_back(sigma[i]);
  }
  return cs;
}

inline int nonzero_small(std::mt19937& rng, int bound = 3) {
  std::uniform_int_distribution<int> d(-bound, bound - 1);
  int v = d(rng);
  return v >= 0 ? v + 1 : v;
}

// Abelian two-level action on Q[x0..xm], wt(x_j) = -j. The weight-1 vector
// lowers x_j -> c_j x_{j-1}; the weight-`ratio` vector sends
// x_j -> alpha u(x0) c_j ... c_{j-ratio+1} x_{j-ratio}, so the two commute.
inline DerivationAction random_chain_action(std::mt19937& rng, size_t m, int ratio) {
  std::vector<std::string> names;
  std::vector<int> weights;
  for (size_t j = 0; j <= m; ++j) {
    names.push_back("x" + std::to_string(j));
    weights.push_back(-static_cast<int>(j));
  }
  RingPtr R = GradedRing::make(names, weights);
  std::vector<int> c(m + 1, 0);
  for (size_t j = 1; j <= m; ++j) c[j] = nonzero_small(rng);
  int alpha = nonzero_small(rng, 2);
  std::uniform_int_distribution<int> pick(0, 2);
  Polynomial x0 = Polynomial::variable(R, 0);
  Polynomial u = std::vector<Polynomial>{Polynomial::constant(R, 1), x0, x0 + Polynomial::constant(R, nonzero_small(rng))}[pick(rng)];
  GradedLieAlgebra lie({{ratio, {"xi1"}}, {1, {"xi2"}}});
  std::vector<std::vector<Polynomial>> table(2, std::vector<Polynomial>(m + 1, Polynomial(R)));
  for (size_t j = 1; j <= m; ++j) table[1][j] = Polynomial::variable(R, j - 1) * Rational(c[j]);
  for (size_t j = static_cast<size_t>(ratio); j <= m; ++j) {
    Rational coef = alpha;
    for (size_t k = j - static_cast<size_t>(ratio) + 1; k <= j; ++k) coef *= c[k];
    table[0][j] = u * Polynomial::variable(R, j - static_cast<size_t>(ratio)) * coef;
  }
  return DerivationAction(PresentedAlgebra(R), lie, table);
}

// Heisenberg realization with distinct random coefficients a != b.
inline DerivationAction random_heisenberg_action(std::mt19937& rng) {
  int a = nonzero_small(rng), b = nonzero_small(rng);
  while (b == a) b = nonzero_small(rng);
  return heisenberg_action("(" + std::to_string(a) + ")", "(" + std::to_string(b) + ")");
}

}  // namespace nrgit::testing
