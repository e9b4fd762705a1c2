#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "nrgit/errors.hpp"
#include "nrgit/quotient.hpp"
#include "nrgit/uea.hpp"

namespace nrgit {

namespace detail {

inline std::vector<size_t> identity_map(size_t n) {
  std::vector<size_t> m(n);
  std::iota(m.begin(), m.end(), 0);
  return m;
}

inline OrderKind plain_kind(const GradedRing& R) { return R.custom() ? OrderKind::degrevlex : R.kind(); }

// g in rad(I) iff 1 in I + <1 - s g>.
inline bool in_radical(const Ideal& I, const Polynomial& g) {
  if (I.contains(g)) return true;
  const auto& R = *I.ring();
  auto names = R.names();
  auto weights = R.weights();
  names.push_back(fresh_name(names, "_s"));
  weights.push_back(0);
  RingPtr S = GradedRing::make(names, weights, plain_kind(R));
  auto map = identity_map(R.nvars());
  std::vector<Polynomial> gens;
  for (const auto& p : I.groebner_basis()) gens.push_back(p.embed(S, map));
  gens.push_back(Polynomial::constant(S, 1) - Polynomial::variable(S, R.nvars()) * g.embed(S, map));
  return Ideal(S, gens).is_unit();
}

inline std::vector<Polynomial> product_generators(const PresentedAlgebra& A,
                                                  const std::vector<std::vector<Polynomial>>& factors) {
  std::vector<Polynomial> acc{A.constant(1)};
  for (const auto& fac : factors) {
    std::vector<Polynomial> next;
    for (const auto& x : acc)
      for (const auto& y : fac) {
        Polynomial r = A.reduce(x * y);
        if (r.is_zero()) continue;
        Polynomial m = r.monic();
        if (std::none_of(next.begin(), next.end(), [&](const Polynomial& q) { return q.monic() == m; }))
          next.push_back(r);
      }
    acc = std::move(next);
  }
  return acc;
}

// All q <= p componentwise.
inline std::vector<PBW> sub_indices(const PBW& p) {
  std::vector<PBW> out;
  PBW q(p.size(), 0);
  std::function<void(size_t)> rec = [&](size_t j) {
    if (j == p.size()) {
      out.push_back(q);
      return;
    }
    for (int k = 0; k <= p[j]; ++k) {
      q[j] = k;
      rec(j + 1);
    }
    q[j] = 0;
  };
  rec(0);
  return out;
}

inline Integer multi_binomial(const PBW& p, const PBW& q) {
  Integer c = 1;
  for (size_t j = 0; j < p.size(); ++j) c *= binomial(p[j], q[j]);
  return c;
}

// Reorders the Lie basis: new index j is old index order[j].
inline DerivationAction permute_basis(const DerivationAction& act, const std::vector<size_t>& order) {
  const auto& lie = act.lie();
  std::vector<GradedLieAlgebra::Level> levels;
  for (const auto& l : lie.levels()) levels.push_back({l.weight, {}});
  for (size_t j : order) levels[lie.level_of(j)].names.push_back(lie.name(j));
  GradedLieAlgebra q(levels);
  for (size_t a = 0; a < lie.dim(); ++a)
    for (size_t b = 0; b < lie.dim(); ++b) {
      const LieElement& old = lie.bracket(order[a], order[b]);
      LieElement v(lie.dim(), 0);
      for (size_t j = 0; j < lie.dim(); ++j) v[j] = old[order[j]];
      q.set_bracket(a, b, v);
    }
  std::vector<std::vector<Polynomial>> table;
  for (size_t j : order) table.push_back(act.table()[j]);
  return DerivationAction(act.algebra(), q, table);
}

}  // namespace detail

// Ideal of the weight-0 locus Z: relations plus the negative-weight variables.
inline Ideal zero_locus_ideal(const PresentedAlgebra& A) {
  std::vector<Polynomial> neg;
  for (size_t g = 0; g < A.ngens(); ++g)
    if (A.ring()->weight(g) < 0) neg.push_back(Polynomial::variable(A.ring(), g));
  return A.ideal(neg);
}

struct LevelFitting {
  size_t level = 0;  // 1-based
  size_t rank = 0;
  int k = 0;
  FittingChain chain;
};

inline std::vector<LevelFitting> level_fittings(const DerivationAction& act) {
  std::vector<LevelFitting> out;
  for (size_t i = 1; i <= act.lie().nlevels(); ++i) {
    auto m = relative_map(act, i);
    LevelFitting l;
    l.level = i;
    l.rank = m.target_rank();
    l.chain = fitting_chain(m);
    l.k = min_nonzero_fitting(l.chain);
    out.push_back(std::move(l));
  }
  return out;
}

struct WuuOptions {
  bool reduced = true;  // search for a rational witness point
  int samples = 200;
  uint64_t seed = 0;
};

struct WuuReport {
  bool holds = false;
  std::vector<int> k;
  std::vector<Polynomial> product;          // generators of prod_i Fit_{k_i}
  std::optional<Polynomial> nonvanishing;   // a generator not vanishing on Z
  std::optional<PointEval> witness;
  std::vector<size_t> stabiliser_dims;      // dim Stab_{u_i}(witness), i = 1..n
};

namespace detail {

constexpr size_t kWitnessGrid = 625;

inline bool is_witness(const DerivationAction& act, const Polynomial& g, const std::vector<int>& k, const PointEval& z,
                       std::vector<size_t>& dims) {
  for (const auto& r : act.algebra().relations().generators())
    if (r.evaluate(z) != 0) return false;
  if (g.evaluate(z) == 0) return false;
  dims.clear();
  size_t expect = 0;
  for (size_t i = 1; i <= k.size(); ++i) {
    expect += static_cast<size_t>(k[i - 1]);
    size_t d = stabiliser_at_point(act, i, z).dimension;
    if (d != expect) return false;
    dims.push_back(d);
  }
  return true;
}

// Negative-weight coordinates are 0; weight-0 coordinates run over a small
// grid starting at all ones, then seeded random values.
inline std::optional<PointEval> sample_witness(const DerivationAction& act, const Polynomial& g,
                                               const std::vector<int>& k, const WuuOptions& opt,
                                               std::vector<size_t>& dims) {
  const auto& R = *act.ring();
  std::vector<size_t> free;
  for (size_t v = 0; v < R.nvars(); ++v)
    if (R.weight(v) == 0) free.push_back(v);
  PointEval z(R.nvars(), 0);
  const int grid[] = {1, -1, 2, -2, 0};
  std::vector<int> digit(free.size(), 0);
  for (size_t n = 0; n < kWitnessGrid; ++n) {
    for (size_t c = 0; c < free.size(); ++c) z[free[c]] = grid[digit[c]];
    if (is_witness(act, g, k, z, dims)) return z;
    size_t c = 0;
    while (c < digit.size() && digit[c] == 4) digit[c++] = 0;
    if (c == digit.size()) break;
    ++digit[c];
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int n = 0; n < opt.samples; ++n) {
    for (size_t v : free) z[v] = d(rng);
    if (is_witness(act, g, k, z, dims)) return z;
  }
  return std::nullopt;
}

}  // namespace detail

// WUU holds iff prod_i Fit_{k_i} does not vanish on Z = V(A_{<0}).
inline WuuReport check_wuu(const DerivationAction& act, const WuuOptions& opt = {}) {
  WuuReport rep;
  const auto& A = act.algebra();
  std::vector<std::vector<Polynomial>> factors;
  for (const auto& l : level_fittings(act)) {
    rep.k.push_back(l.k);
    factors.push_back(l.chain.generators(l.k));
  }
  rep.product = detail::product_generators(A, factors);
  Ideal N = zero_locus_ideal(A);
  for (const auto& g : rep.product)
    if (!detail::in_radical(N, g)) {
      rep.nonvanishing = g;
      break;
    }
  rep.holds = rep.nonvanishing.has_value();
  if (rep.holds && opt.reduced) rep.witness = detail::sample_witness(act, *rep.nonvanishing, rep.k, opt, rep.stabiliser_dims);
  return rep;
}

struct CentreOptions {
  int degree_bound = 4;
};

// Levels are 1-based in the API and 0-based in the vectors below.
struct CentreData {
  bool needed = true;
  DerivationAction action;                 // Lie basis reordered so the chosen rows lead each level
  std::vector<size_t> basis_order;         // new basis index -> input basis index
  std::vector<int> k;
  std::vector<std::vector<Polynomial>> fitting;  // Fit_{k_i} generators
  std::vector<Polynomial> product;         // generators of prod_i Fit_{k_i}
  std::vector<std::vector<size_t>> rows;   // chosen rows per level
  std::vector<std::vector<Polynomial>> f;  // witnesses f^(i)_nu of weight -w_i
  std::vector<Polynomial> minors;          // a^(i)
  Polynomial a;
  Ideal ideal;                             // I = prod Fit + A_{<0} + relations
  int degree_bound = 0;

  size_t nlevels() const { return k.size(); }
  size_t t(size_t i) const { return rows[i - 1].size(); }
  int w(size_t i) const { return action.lie().level_weight(i - 1); }
  const Polynomial& a_level(size_t i) const { return minors[i - 1]; }
  // prod_{from <= i' <= to} a^(i'), empty product 1.
  Polynomial a_range(size_t from, size_t to) const {
    Polynomial p = action.algebra().constant(1);
    for (size_t i = from; i <= to && i <= minors.size(); ++i) p = action.algebra().reduce(p * minors[i - 1]);
    return p;
  }
};

inline CentreData centre(const DerivationAction& act, const CentreOptions& opt = {}) {
  CentreData cd;
  cd.degree_bound = opt.degree_bound;
  const auto& A = act.algebra();
  const auto& lie = act.lie();
  const size_t n = lie.nlevels();
  auto fits = level_fittings(act);
  for (const auto& l : fits) {
    cd.k.push_back(l.k);
    cd.fitting.push_back(l.chain.generators(l.k));
  }
  cd.product = detail::product_generators(A, cd.fitting);
  if (check_cdrs(act).holds) {
    cd.needed = false;
    cd.action = act;
    cd.basis_order = detail::identity_map(lie.dim());
    cd.a = A.constant(1);
    cd.ideal = Ideal::unit(act.ring());
    return cd;
  }
  Ideal N = zero_locus_ideal(A);
  if (std::all_of(cd.product.begin(), cd.product.end(), [&](const Polynomial& g) { return detail::in_radical(N, g); }))
    throw Refusal("WUU fails: the product of Fitting ideals vanishes on the weight-0 locus");

  std::vector<std::vector<size_t>> chosen(n);
  std::vector<std::vector<Polynomial>> fs(n);
  for (size_t i = 1; i <= n; ++i) {
    const auto basis = lie.level_basis(i - 1);
    const size_t r = basis.size(), t = r - static_cast<size_t>(cd.k[i - 1]);
    if (t == 0) continue;
    const int w = lie.level_weight(i - 1);
    // By degree, then leading monomials first.
    auto mons = A.standard_monomials(-w, opt.degree_bound);
    std::stable_sort(mons.begin(), mons.end(), [&](const Exponents& x, const Exponents& y) {
      int dx = total_degree(x), dy = total_degree(y);
      return dx != dy ? dx < dy : act.ring()->order().compare(x, y) > 0;
    });
    std::vector<Polynomial> cands;
    for (const auto& e : mons) cands.push_back(Polynomial::monomial(act.ring(), e, 1));
    std::vector<std::vector<Polynomial>> img(r);
    for (size_t q = 0; q < r; ++q)
      for (const auto& c : cands) img[q].push_back(act.apply(basis[q], c));
    bool found = false;
    for_each_subset(cands.size(), t, [&](const std::vector<size_t>& cs) {
      if (found) return;
      for_each_subset(r, t, [&](const std::vector<size_t>& rs) {
        if (found) return;
        std::vector<std::vector<Polynomial>> M(t);
        for (size_t a = 0; a < t; ++a)
          for (size_t b = 0; b < t; ++b) M[a].push_back(img[rs[a]][cs[b]]);
        Polynomial det = A.reduce(determinant(M, act.ring()));
        if (det.is_zero() || detail::in_radical(N, det)) return;
        found = true;
        for (size_t q : rs) chosen[i - 1].push_back(basis[q]);
        for (size_t c : cs) fs[i - 1].push_back(cands[c]);
      });
    });
    if (!found)
      throw BoundExhausted("level " + std::to_string(i) + ": no minor of weight-" + std::to_string(-w) +
                               " witnesses of degree <= " + std::to_string(opt.degree_bound) +
                               " is nonzero on the weight-0 locus",
                           opt.degree_bound);
  }

  // Chosen rows first within each level.
  for (size_t i = 0; i < n; ++i) {
    for (size_t j : chosen[i]) cd.basis_order.push_back(j);
    for (size_t j : lie.level_basis(i))
      if (std::find(chosen[i].begin(), chosen[i].end(), j) == chosen[i].end()) cd.basis_order.push_back(j);
  }
  cd.action = detail::permute_basis(act, cd.basis_order);
  size_t off = 0;
  for (size_t i = 0; i < n; ++i) {
    std::vector<size_t> rows;
    for (size_t a = 0; a < chosen[i].size(); ++a) rows.push_back(off + a);
    cd.rows.push_back(rows);
    off += lie.level_dim(i);
  }
  cd.f = fs;
  for (size_t i = 1; i <= n; ++i) {
    const size_t t = cd.t(i);
    std::vector<std::vector<Polynomial>> M(t);
    for (size_t a = 0; a < t; ++a)
      for (size_t b = 0; b < t; ++b) M[a].push_back(cd.action.apply(cd.rows[i - 1][a], cd.f[i - 1][b]));
    Polynomial ai = A.reduce(determinant(M, act.ring()));
    if (!ai.is_homogeneous() || (!ai.is_zero() && ai.min_weight() != 0))
      throw VerificationFailure("a^(" + std::to_string(i) + ") = " + ai.to_string() + " is not of weight 0");
    if (!fits[i - 1].chain.ideal(cd.k[i - 1]).contains(ai))
      throw VerificationFailure("a^(" + std::to_string(i) + ") = " + ai.to_string() + " is not in Fit_" +
                                std::to_string(cd.k[i - 1]));
    cd.minors.push_back(ai);
  }
  cd.a = cd.a_range(1, n);
  if (detail::in_radical(N, cd.a))
    throw BoundExhausted("product of the chosen minors vanishes on the weight-0 locus", opt.degree_bound);
  std::vector<Polynomial> gens = cd.product;
  for (const auto& g : N.generators()) gens.push_back(g);
  cd.ideal = Ideal(act.ring(), gens);
  return cd;
}

struct JMembership {
  bool member = true;
  int component_weight = 0;  // weight of the failing component
  PBW witness;               // xi^witness . g_w is not in I
  Polynomial value;
};

// g is in J iff xi^p . g_w lies in I for every weight component g_w and every
// PBW monomial p of weight <= -w.
inline JMembership j_membership(const DerivationAction& act, const Ideal& I, const Polynomial& g) {
  JMembership res;
  UniversalEnveloping U(act.lie());
  for (const auto& [w, gw] : weight_decompose(act.algebra().reduce(g)))
    for (const auto& p : U.monomials_up_to_weight(-w)) {
      Polynomial v = act.apply_pbw(p, gw);
      if (!I.contains(v)) {
        res.member = false;
        res.component_weight = w;
        res.witness = p;
        res.value = v;
        return res;
      }
    }
  return res;
}

inline UEAElement lie_to_uea(const GradedLieAlgebra& lie, const LieElement& xi) {
  UEAElement x;
  for (size_t j = 0; j < lie.dim(); ++j)
    if (xi[j] != 0) {
      PBW p(lie.dim(), 0);
      p[j] = 1;
      x[p] = xi[j];
    }
  return x;
}

// det of (xi^(i)_rho . f^(i)_nu) with row mu replaced by `row`.
inline Polynomial e_operator_row(const CentreData& cd, size_t i, size_t mu, const std::vector<Polynomial>& row) {
  const size_t t = cd.t(i);
  std::vector<std::vector<Polynomial>> M(t);
  for (size_t a = 0; a < t; ++a)
    for (size_t b = 0; b < t; ++b)
      M[a].push_back(a == mu ? row[b] : cd.action.apply(cd.rows[i - 1][a], cd.f[i - 1][b]));
  return cd.action.algebra().reduce(determinant(M, cd.action.ring()));
}

inline Polynomial e_operator(const CentreData& cd, size_t i, size_t mu, const UEAElement& x) {
  std::vector<Polynomial> row;
  for (const auto& f : cd.f[i - 1]) row.push_back(apply_uea(cd.action, x, f));
  return e_operator_row(cd, i, mu, row);
}

inline Polynomial e_operator(const CentreData& cd, size_t i, size_t mu, const LieElement& xi) {
  std::vector<Polynomial> row;
  for (const auto& f : cd.f[i - 1]) row.push_back(cd.action.apply(xi, f));
  return e_operator_row(cd, i, mu, row);
}

inline Polynomial e_operator(const CentreData& cd, size_t i, size_t mu, const Rational& c) {
  std::vector<Polynomial> row;
  for (const auto& f : cd.f[i - 1]) row.push_back(f * c);
  return e_operator_row(cd, i, mu, row);
}

// sum_mu (xi^(i)_mu . h) E^(i)_mu(A) = (A . h) a^(i) for A of level i.
inline bool verify_determinantal_sum(const CentreData& cd, size_t i, const Polynomial& h, const LieElement& x) {
  const auto& A = cd.action.algebra();
  Polynomial lhs(cd.action.ring());
  for (size_t mu = 0; mu < cd.t(i); ++mu)
    lhs += cd.action.apply(cd.rows[i - 1][mu], h) * e_operator(cd, i, mu, x);
  return A.equal(lhs, cd.action.apply(x, h) * cd.a_level(i));
}

struct ETerm {
  size_t level = 0, mu = 0;              // E^(level)_mu
  size_t other_level = 0, other_mu = 0;  // of xi^(other_level)_other_mu
  Polynomial value;
};

struct BElements {
  std::vector<std::vector<Polynomial>> b;         // b^(i)_mu
  std::vector<std::vector<Polynomial>> scaled;    // (prod_{i'<i} a^(i')) b^(i)_mu
  std::vector<std::vector<Polynomial>> e_scalar;  // E^(i)_mu(w_i)
  std::vector<ETerm> e_cross;
  size_t delta_checks = 0;
  size_t fitting_checks = 0;
  size_t j_checks = 0;
};

inline Ideal fitting_product_ideal(const CentreData& cd, size_t from) {
  std::vector<std::vector<Polynomial>> fac(cd.fitting.begin() + static_cast<long>(from - 1), cd.fitting.end());
  return cd.action.algebra().ideal(detail::product_generators(cd.action.algebra(), fac));
}

inline BElements construct_b(const CentreData& cd) {
  BElements be;
  if (!cd.needed) return be;
  const auto& act = cd.action;
  const auto& A = act.algebra();
  const auto& lie = act.lie();
  const size_t n = cd.nlevels();
  be.b.resize(n);
  be.scaled.resize(n);
  be.e_scalar.resize(n);
  for (size_t i = n; i >= 1; --i) {
    for (size_t mu = 0; mu < cd.t(i); ++mu) {
      Polynomial es = e_operator(cd, i, mu, Rational(cd.w(i)));
      be.e_scalar[i - 1].push_back(es);
      Polynomial v = es * cd.a_range(i + 1, n);
      for (size_t ip = i + 1; ip <= n; ++ip)
        for (size_t mp = 0; mp < cd.t(ip); ++mp) {
          Polynomial e = e_operator(cd, i, mu, lie.basis_vector(cd.rows[ip - 1][mp]));
          be.e_cross.push_back({i, mu, ip, mp, e});
          v -= e * cd.a_range(i + 1, ip - 1) * be.b[ip - 1][mp];
        }
      be.b[i - 1].push_back(A.reduce(v));
    }
  }
  UniversalEnveloping U(lie);
  for (size_t i = 1; i <= n; ++i) {
    const std::string lvl = "level " + std::to_string(i);
    Polynomial top = cd.a_range(i, n);
    for (size_t mu = 0; mu < cd.t(i); ++mu)
      for (size_t nu = 0; nu < cd.t(i); ++nu) {
        Polynomial lhs = act.apply(cd.rows[i - 1][mu], be.b[i - 1][nu]);
        Polynomial rhs = mu == nu ? top * Rational(cd.w(i)) : A.zero();
        ++be.delta_checks;
        if (!A.equal(lhs, rhs))
          throw VerificationFailure(lvl + ": " + lie.name(cd.rows[i - 1][mu]) + " . b_" + std::to_string(nu + 1) +
                                    " = " + lhs.to_string() + ", expected " + A.reduce(rhs).to_string());
      }
    Ideal fit = fitting_product_ideal(cd, i);
    for (const auto& p : U.monomials_of_weight(cd.w(i)))
      for (size_t mu = 0; mu < cd.t(i); ++mu) {
        Polynomial v = act.apply_pbw(p, be.b[i - 1][mu]);
        ++be.fitting_checks;
        if (!fit.contains(v))
          throw VerificationFailure(lvl + ": " + format_pbw(lie, p) + " . b_" + std::to_string(mu + 1) + " = " +
                                    v.to_string() + " is not in the Fitting product");
      }
    Polynomial lower = cd.a_range(1, i - 1);
    for (size_t mu = 0; mu < cd.t(i); ++mu) {
      Polynomial s = A.reduce(lower * be.b[i - 1][mu]);
      auto jm = j_membership(act, cd.ideal, s);
      ++be.j_checks;
      if (!jm.member)
        throw VerificationFailure(lvl + ": scaled b_" + std::to_string(mu + 1) + " fails J-membership at " +
                                  format_pbw(lie, jm.witness) + " -> " + jm.value.to_string());
      be.scaled[i - 1].push_back(s);
    }
  }
  return be;
}

using BetaMemo = std::map<std::tuple<size_t, size_t, PBW>, Polynomial>;

// beta^(i)_mu(xi^p) for p of weight w_i, by the recursion over lower levels.
inline Polynomial beta(const CentreData& cd, size_t i, size_t mu, const PBW& p, BetaMemo& memo) {
  auto key = std::make_tuple(i, mu, p);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  const auto& act = cd.action;
  const auto& lie = act.lie();
  const size_t n = cd.nlevels();
  size_t top = p.size();
  while (top > 0 && p[top - 1] == 0) --top;
  if (top == 0) throw std::invalid_argument("beta needs a nonzero PBW monomial");
  Polynomial out = e_operator(cd, i, mu, complete_bracket(lie, p)) * Rational(lie.weight_of(top - 1)) *
                   cd.a_range(i + 1, n);
  auto subs = detail::sub_indices(p);
  for (size_t ip = i + 1; ip <= n; ++ip) {
    if (cd.t(ip) == 0) continue;
    for (const auto& q : subs) {
      if (act.pbw_weight(q) != cd.w(ip)) continue;
      PBW rest = exp_sub(p, q);
      Rational c(detail::multi_binomial(p, q));
      for (size_t mp = 0; mp < cd.t(ip); ++mp) {
        auto word = pbw_word(rest);
        word.push_back(cd.rows[ip - 1][mp]);
        Polynomial e = e_operator(cd, i, mu, complete_bracket(lie, word));
        if (e.is_zero()) continue;
        out -= e * cd.a_range(i + 1, ip - 1) * beta(cd, ip, mp, q, memo) * c;
      }
    }
  }
  out = act.algebra().reduce(out);
  memo.emplace(key, out);
  return out;
}

struct BetaCheck {
  bool ok = false;
  Polynomial applied;  // xi^p . b^(i)_mu
  Polynomial beta;
};

inline BetaCheck beta_check(const CentreData& cd, const BElements& be, size_t i, size_t mu, const PBW& p,
                            BetaMemo* memo = nullptr) {
  if (cd.action.pbw_weight(p) != cd.w(i)) throw std::invalid_argument("PBW monomial weight differs from w_i");
  BetaMemo local;
  BetaCheck c;
  c.applied = cd.action.apply_pbw(p, be.b[i - 1][mu]);
  c.beta = beta(cd, i, mu, p, memo ? *memo : local);
  c.ok = cd.action.algebra().equal(c.applied, c.beta);
  return c;
}

struct BetaReport {
  bool ok = true;
  size_t checks = 0;
  std::vector<std::string> failures;
};

// Every level, every b, every PBW monomial of weight w_i.
inline BetaReport beta_check_all(const CentreData& cd, const BElements& be) {
  BetaReport rep;
  if (!cd.needed) return rep;
  UniversalEnveloping U(cd.action.lie());
  BetaMemo memo;
  for (size_t i = 1; i <= cd.nlevels(); ++i)
    for (const auto& p : U.monomials_of_weight(cd.w(i)))
      for (size_t mu = 0; mu < cd.t(i); ++mu) {
        auto c = beta_check(cd, be, i, mu, p, &memo);
        ++rep.checks;
        if (!c.ok) {
          rep.ok = false;
          rep.failures.push_back("level " + std::to_string(i) + ", b_" + std::to_string(mu + 1) + ", " +
                                 format_pbw(cd.action.lie(), p) + ": applied " + c.applied.to_string() + ", beta " +
                                 c.beta.to_string());
        }
      }
  return rep;
}

struct JGenerator {
  Polynomial g;
  std::string origin;
  size_t level = 0;  // for scaled b elements: 1-based level and row
  size_t mu = 0;
};

struct BlowupChart {
  DerivationAction base;
  Polynomial a;
  std::vector<JGenerator> generators;  // chart variable t_j = g_j / a
  std::vector<size_t> t_vars;
  std::vector<std::vector<size_t>> rows;  // chosen rows per level, for the certificate
  DerivationAction action;                // extended action on A[J/a]
};

struct ChartOptions {
  int j_degree = -1;  // degree bound of the J search; -1 means deg a
  std::vector<Polynomial> extra;
};

namespace detail {

// relations + (a t_j - g_j) + (a s - 1) in an order eliminating s. The chart
// ring C drops s; h / a lies in A[t] iff NF(s h) is free of s.
struct GraphIdeal {
  RingPtr E, C;
  size_t s = 0;
  std::vector<size_t> t_vars;
  Ideal ideal;

  std::optional<Polynomial> to_chart(const Polynomial& p) const {
    std::vector<Polynomial::Term> ts;
    for (const auto& [e, c] : p.terms()) {
      if (e[s] != 0) return std::nullopt;
      ts.emplace_back(Exponents(e.begin(), e.begin() + static_cast<long>(s)), c);
    }
    return Polynomial::from_terms(C, ts);
  }
  std::optional<Polynomial> divide_by_a(const Polynomial& h) const {
    auto idx = identity_map(h.ring()->nvars());
    return to_chart(ideal.normal_form(Polynomial::variable(E, s) * h.embed(E, idx)));
  }
};

inline GraphIdeal graph_ideal(const PresentedAlgebra& A, const Polynomial& a, const std::vector<JGenerator>& gens) {
  const auto& R = *A.ring();
  GraphIdeal gi;
  auto names = R.names();
  auto weights = R.weights();
  for (size_t j = 0; j < gens.size(); ++j) {
    gi.t_vars.push_back(names.size());
    names.push_back(fresh_name(names, "t" + std::to_string(j + 1)));
    weights.push_back(gens[j].g.is_zero() ? 0 : gens[j].g.min_weight());
  }
  gi.s = names.size();
  OrderKind kind = plain_kind(R);
  gi.C = GradedRing::make(names, weights, kind);
  names.push_back(fresh_name(names, "_s"));
  weights.push_back(0);
  std::vector<bool> drop(names.size(), false);
  drop[gi.s] = true;
  gi.E = elimination_ring(GradedRing::make(names, weights, kind), drop);
  auto idx = identity_map(R.nvars());
  Polynomial aE = a.embed(gi.E, idx);
  std::vector<Polynomial> graph;
  for (const auto& r : A.relations().groebner_basis()) graph.push_back(r.embed(gi.E, idx));
  for (size_t j = 0; j < gens.size(); ++j)
    graph.push_back(aE * Polynomial::variable(gi.E, gi.t_vars[j]) - gens[j].g.embed(gi.E, idx));
  graph.push_back(aE * Polynomial::variable(gi.E, gi.s) - Polynomial::constant(gi.E, 1));
  gi.ideal = Ideal(gi.E, graph);
  return gi;
}

// Adds xi . g for generators g until every xi . g / a lies in A[t].
inline void close_under_action(const DerivationAction& act, const Ideal& I, const Polynomial& a,
                               std::vector<JGenerator>& gens) {
  GraphIdeal gi = graph_ideal(act.algebra(), a, gens);
  for (size_t k = 0; k < gens.size(); ++k)
    for (size_t j = 0; j < act.lie().dim(); ++j) {
      Polynomial h = act.apply(j, gens[k].g);
      if (h.is_zero() || gi.divide_by_a(h)) continue;
      auto jm = j_membership(act, I, h);
      if (!jm.member) throw VerificationFailure(act.lie().name(j) + " . " + gens[k].g.to_string() + " left J");
      for (const auto& [w, part] : weight_decompose(h))
        gens.push_back({part, act.lie().name(j) + " . [" + gens[k].origin + "]"});
      gi = graph_ideal(act.algebra(), a, gens);
    }
}

}  // namespace detail

// Homogeneous members g of J up to a degree bound, found per graded piece by
// linear algebra and kept only when g / a is not already in A[t].
inline std::vector<JGenerator> search_j_generators(const DerivationAction& act, const Ideal& I, const Polynomial& a,
                                                   const std::vector<JGenerator>& known, int degree) {
  const auto& A = act.algebra();
  const auto& R = *act.ring();
  UniversalEnveloping U(act.lie());
  int wmin = 0;
  for (size_t v = 0; v < R.nvars(); ++v) wmin = std::min(wmin, R.weight(v));
  std::vector<JGenerator> all = known;
  detail::GraphIdeal gi = detail::graph_ideal(A, a, all);
  std::vector<JGenerator> out;
  for (int w = 0; w >= wmin * degree; --w) {
    auto mons = A.standard_monomials(w, degree);
    if (mons.empty()) continue;
    auto pbws = U.monomials_up_to_weight(-w);
    std::map<std::pair<size_t, Exponents>, size_t> row_of;
    std::vector<std::vector<std::pair<size_t, Rational>>> cols(mons.size());
    for (size_t c = 0; c < mons.size(); ++c) {
      Polynomial m = Polynomial::monomial(act.ring(), mons[c], 1);
      for (size_t pi = 0; pi < pbws.size(); ++pi) {
        Polynomial v = I.normal_form(act.apply_pbw(pbws[pi], m));
        for (const auto& [e, coef] : v.terms()) {
          auto key = std::make_pair(pi, e);
          auto it = row_of.find(key);
          size_t r = it == row_of.end() ? row_of.emplace(key, row_of.size()).first->second : it->second;
          cols[c].push_back({r, coef});
        }
      }
    }
    QMatrix M(row_of.size(), QVector(mons.size(), 0));
    for (size_t c = 0; c < mons.size(); ++c)
      for (const auto& [r, v] : cols[c]) M[r][c] += v;
    for (const auto& v : nullspace(M, mons.size())) {
      Polynomial g(act.ring());
      for (size_t c = 0; c < mons.size(); ++c)
        if (v[c] != 0) g += Polynomial::monomial(act.ring(), mons[c], v[c]);
      g = A.reduce(g);
      if (g.is_zero() || gi.divide_by_a(g)) continue;
      auto jm = j_membership(act, I, g);
      if (!jm.member) throw VerificationFailure("search produced " + g.to_string() + " outside J");
      out.push_back({g, "search"});
      all.push_back(out.back());
      gi = detail::graph_ideal(A, a, all);
    }
  }
  return out;
}

// A[J/a] presented as A[t] modulo the s-free part of the graph ideal, with
// xi . t_j = NF(s (xi . g_j)).
inline BlowupChart affine_chart(const DerivationAction& base, const Polynomial& a, std::vector<JGenerator> gens) {
  const auto& A = base.algebra();
  const auto& R = *base.ring();
  const Polynomial a0 = A.reduce(a);
  if (!a0.is_homogeneous() || a0.is_zero() || a0.min_weight() != 0)
    throw std::invalid_argument("chart element " + a0.to_string() + " is not a nonzero weight-0 element");
  for (auto& g : gens) {
    g.g = A.reduce(g.g);
    if (!g.g.is_homogeneous()) throw std::invalid_argument("J generator " + g.g.to_string() + " is not homogeneous");
  }
  BlowupChart ch;
  ch.base = base;
  ch.a = a0;
  ch.generators = gens;
  auto gi = detail::graph_ideal(A, a0, gens);
  ch.t_vars = gi.t_vars;
  std::vector<Polynomial> rels;
  for (const auto& g : gi.ideal.groebner_basis())
    if (auto p = gi.to_chart(g)) rels.push_back(*p);
  PresentedAlgebra chartA(gi.C, rels);
  const auto& lie = base.lie();
  auto idx = detail::identity_map(R.nvars());
  std::vector<std::vector<Polynomial>> table(lie.dim());
  for (size_t j = 0; j < lie.dim(); ++j) {
    for (size_t g = 0; g < R.nvars(); ++g) table[j].push_back(base.image(j, g).embed(gi.C, idx));
    for (const auto& g : gens) {
      auto p = gi.divide_by_a(base.apply(j, g.g));
      if (!p) throw VerificationFailure(lie.name(j) + " . " + g.g.to_string() + " divided by a is not in the chart");
      table[j].push_back(*p);
    }
  }
  ch.action = DerivationAction(chartA, lie, table);
  return ch;
}

inline BlowupChart build_chart(const CentreData& cd, const BElements& be, const ChartOptions& opt = {}) {
  if (!cd.needed) throw Refusal("CDRS already holds; no blow-up needed, run quotient instead");
  const auto& act = cd.action;
  auto aj = j_membership(act, cd.ideal, cd.a);
  if (!aj.member) throw Refusal("a = " + cd.a.to_string() + " is not in J");
  std::vector<JGenerator> gens;
  for (size_t i = 1; i <= cd.nlevels(); ++i)
    for (size_t mu = 0; mu < cd.t(i); ++mu)
      gens.push_back({be.scaled[i - 1][mu], "b(" + std::to_string(i) + ")_" + std::to_string(mu + 1), i, mu});
  for (const auto& g : opt.extra) {
    auto jm = j_membership(act, cd.ideal, g);
    if (!jm.member)
      throw std::invalid_argument("extra generator " + g.to_string() + " is not in J: " +
                                  format_pbw(act.lie(), jm.witness) + " gives " + jm.value.to_string());
    for (const auto& [w, part] : weight_decompose(act.algebra().reduce(g))) gens.push_back({part, "extra"});
  }
  int degree = opt.j_degree >= 0 ? opt.j_degree : cd.a.total_degree();
  for (auto& g : search_j_generators(act, cd.ideal, cd.a, gens, degree)) gens.push_back(std::move(g));
  detail::close_under_action(act, cd.ideal, cd.a, gens);
  BlowupChart ch = affine_chart(act, cd.a, gens);
  ch.rows = cd.rows;
  return ch;
}

struct ChartCertificate {
  size_t level = 0;
  int weight = 0;
  std::vector<std::vector<Polynomial>> matrix;  // xi^(i)_rho . t_{c_mu}
  bool ok = false;
};

struct ChartReport {
  bool holds = false;
  CdrsReport cdrs;
  std::vector<ChartCertificate> certificates;
  std::vector<std::string> failures;
};

// Structural identities of the chart: A -> A[J/a] is a ring map, a t_j = g_j,
// and the extended derivations agree with the base ones.
inline std::vector<std::string> chart_consistency(const BlowupChart& ch) {
  std::vector<std::string> bad;
  const auto& C = ch.action.algebra();
  const auto& Cr = C.ring();
  auto idx = detail::identity_map(ch.base.ring()->nvars());
  for (const auto& r : ch.base.algebra().relations().generators())
    if (!C.is_zero(r.embed(Cr, idx))) bad.push_back("base relation " + r.to_string() + " fails in the chart");
  Polynomial aC = ch.a.embed(Cr, idx);
  for (size_t k = 0; k < ch.generators.size(); ++k) {
    Polynomial t = Polynomial::variable(Cr, ch.t_vars[k]);
    Polynomial g = ch.generators[k].g.embed(Cr, idx);
    if (!C.equal(aC * t, g)) bad.push_back("a * " + Cr->name(ch.t_vars[k]) + " != " + g.to_string());
    for (size_t j = 0; j < ch.action.lie().dim(); ++j)
      if (!C.equal(aC * ch.action.apply(j, t), ch.base.apply(j, ch.generators[k].g).embed(Cr, idx)))
        bad.push_back(ch.action.lie().name(j) + " does not commute with division by a on " + Cr->name(ch.t_vars[k]));
  }
  for (const auto& v : ch.action.validate()) bad.push_back(v.kind + ": " + v.witness);
  return bad;
}

inline ChartReport verify_chart_cdrs(const BlowupChart& ch) {
  ChartReport rep;
  rep.cdrs = check_cdrs(ch.action);
  rep.failures = chart_consistency(ch);
  const auto& C = ch.action.algebra();
  const auto& lie = ch.action.lie();
  for (size_t i = 1; i <= ch.rows.size(); ++i) {
    std::vector<size_t> cols;
    for (size_t k = 0; k < ch.generators.size(); ++k)
      if (ch.generators[k].level == i) cols.push_back(k);
    const size_t t = ch.rows[i - 1].size();
    if (t == 0) continue;
    ChartCertificate cert;
    cert.level = i;
    cert.weight = lie.level_weight(i - 1);
    cert.ok = cols.size() == t;
    for (size_t rho = 0; rho < t && cert.ok; ++rho) {
      std::vector<Polynomial> row;
      for (size_t nu = 0; nu < t; ++nu) {
        Polynomial v = ch.action.apply(ch.rows[i - 1][rho], Polynomial::variable(C.ring(), ch.t_vars[cols[nu]]));
        if (!C.equal(v, C.constant(rho == nu ? Rational(cert.weight) : Rational(0)))) cert.ok = false;
        row.push_back(v);
      }
      cert.matrix.push_back(row);
    }
    if (!cert.ok) rep.failures.push_back("level " + std::to_string(i) + ": b-column certificate is not w_i times identity");
    rep.certificates.push_back(std::move(cert));
  }
  rep.holds = rep.cdrs.holds && rep.failures.empty();
  if (!rep.cdrs.holds)
    for (const auto& l : rep.cdrs.levels)
      if (!l.holds()) rep.failures.push_back("CDRS fails at level " + std::to_string(l.level));
  return rep;
}

struct BlowupOptions {
  int degree_bound = 4;
  ChartOptions chart;
};

struct BlowupResult {
  CentreData centre;
  BElements b;
  BetaReport beta;
  BlowupChart chart;
  ChartReport report;
};

inline BlowupResult blow_up(const DerivationAction& act, const BlowupOptions& opt = {}) {
  BlowupResult res;
  res.centre = centre(act, {opt.degree_bound});
  if (!res.centre.needed) throw Refusal("CDRS already holds; no blow-up needed, run quotient instead");
  res.b = construct_b(res.centre);
  res.beta = beta_check_all(res.centre, res.b);
  if (!res.beta.ok) throw VerificationFailure("beta recursion: " + res.beta.failures.front());
  res.chart = build_chart(res.centre, res.b, opt.chart);
  res.report = verify_chart_cdrs(res.chart);
  return res;
}

}  // namespace nrgit
