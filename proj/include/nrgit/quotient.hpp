#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nrgit/errors.hpp"
#include "nrgit/infinitesimal.hpp"

namespace nrgit {

// Pairwise commuting locally nilpotent derivations (as generator images) with
// slices: xi_a . f_b = delta_ab.
struct CommutingSlices {
  PresentedAlgebra algebra;
  std::vector<std::vector<Polynomial>> derivations;
  std::vector<Polynomial> slices;

  Polynomial apply(size_t a, const Polynomial& p) const { return apply_derivation_table(algebra, derivations[a], p); }
};

// First violated precondition, if any.
inline std::optional<std::string> check_slice_preconditions(const CommutingSlices& cs) {
  const auto& A = cs.algebra;
  const size_t r = cs.derivations.size();
  if (cs.slices.size() != r) return "derivation and slice counts differ";
  for (size_t a = 0; a < r; ++a)
    for (size_t b = 0; b < r; ++b) {
      Polynomial v = cs.apply(a, cs.slices[b]);
      if (!A.equal(v, Polynomial::constant(A.ring(), a == b ? 1 : 0)))
        return "xi_" + std::to_string(a + 1) + " . f_" + std::to_string(b + 1) + " = " + v.to_string();
    }
  for (size_t a = 0; a < r; ++a)
    for (size_t b = a + 1; b < r; ++b)
      for (size_t g = 0; g < A.ngens(); ++g) {
        Polynomial c = cs.apply(a, cs.derivations[b][g]) - cs.apply(b, cs.derivations[a][g]);
        if (!A.is_zero(c))
          return "xi_" + std::to_string(a + 1) + " and xi_" + std::to_string(b + 1) + " do not commute on " +
                 A.ring()->name(g);
      }
  return std::nullopt;
}

namespace detail {

constexpr int kNilpotencyCap = 200;

// Applies h -> sum_n c_n (xi^n h) s^n for one derivation, with c_n supplied.
template <class Coef>
Polynomial nilpotent_series(const CommutingSlices& cs, size_t a, const Polynomial& h, const Polynomial& s, Coef coef) {
  Polynomial out(cs.algebra.ring());
  Polynomial cur = cs.algebra.reduce(h);
  Polynomial spow = Polynomial::constant(cs.algebra.ring(), 1);
  for (int n = 0; !cur.is_zero(); ++n) {
    if (n > kNilpotencyCap) throw Refusal("derivation is not locally nilpotent within the iteration cap");
    out += cur * spow * coef(n);
    cur = cs.apply(a, cur);
    spow = cs.algebra.reduce(spow * s);
  }
  return cs.algebra.reduce(out);
}

}  // namespace detail

// pi(g) = sum_n ((-1)^|n| / n!) (xi^n . g) f^n, evaluated one derivation at a
// time; this agrees with the multi-index sum because xi_a . f_b = 0 for a != b.
inline Polynomial dixmier_project(const CommutingSlices& cs, const Polynomial& g) {
  Polynomial h = cs.algebra.reduce(g);
  for (size_t a = 0; a < cs.derivations.size(); ++a)
    h = detail::nilpotent_series(cs, a, h, cs.slices[a], [](int n) {
      Rational c = Rational(1) / Rational(factorial(n));
      return n % 2 ? Rational(-c) : c;
    });
  return h;
}

// exp(sum F_a xi_a) g with xi^n g pushed through `images` (x_k -> images[k])
// into a ring carrying the formal variables F_a at positions f_vars[a].
inline Polynomial taylor_expansion(const CommutingSlices& cs, const Polynomial& g, const RingPtr& target,
                                   const std::vector<Polynomial>& images, const std::vector<size_t>& f_vars) {
  struct Piece {
    Polynomial coef;  // in target
    Polynomial h;     // in A
  };
  std::vector<Piece> pieces{{Polynomial::constant(target, 1), cs.algebra.reduce(g)}};
  for (size_t a = 0; a < cs.derivations.size(); ++a) {
    std::vector<Piece> next;
    for (const auto& pc : pieces) {
      Polynomial cur = pc.h;
      Polynomial fpow = pc.coef;
      for (int n = 0; !cur.is_zero(); ++n) {
        if (n > detail::kNilpotencyCap) throw Refusal("derivation is not locally nilpotent within the iteration cap");
        next.push_back({fpow * (Rational(1) / Rational(factorial(n))), cur});
        cur = cs.apply(a, cur);
        fpow = fpow * Polynomial::variable(target, f_vars[a]);
      }
    }
    pieces = std::move(next);
  }
  Polynomial out(target);
  for (const auto& pc : pieces) out += pc.coef * pc.h.substitute(target, images);
  return out;
}

// g = sum_n pi(xi^n g) f^n / n!, checked through formal variables P_k for
// pi(x_k) and F_a for f_a, then substituted back.
inline bool verify_dixmier_roundtrip(const CommutingSlices& cs, const Polynomial& g) {
  const RingPtr& R = cs.algebra.ring();
  std::vector<std::string> names;
  for (size_t k = 0; k < R->nvars(); ++k) names.push_back("_P" + std::to_string(k));
  std::vector<size_t> fvars;
  for (size_t a = 0; a < cs.slices.size(); ++a) {
    fvars.push_back(names.size());
    names.push_back("_F" + std::to_string(a));
  }
  RingPtr T = GradedRing::make(names, std::vector<int>(names.size(), 0));
  std::vector<Polynomial> images;
  for (size_t k = 0; k < R->nvars(); ++k) images.push_back(Polynomial::variable(T, k));
  Polynomial formal = taylor_expansion(cs, g, T, images, fvars);
  std::vector<Polynomial> back;
  for (size_t k = 0; k < R->nvars(); ++k) back.push_back(dixmier_project(cs, Polynomial::variable(R, k)));
  for (const auto& f : cs.slices) back.push_back(f);
  return cs.algebra.equal(formal.substitute(R, back), g);
}

struct SliceSet {
  size_t level = 0;  // 1-based level of the original algebra
  int degree_bound = 0;
  std::vector<LieElement> uprime;
  std::vector<LieElement> complement;
  std::vector<Polynomial> f;
};

namespace detail {

// Solves xi_mu . f_nu = delta over span of standard monomials of weight -w.
inline std::optional<std::vector<Polynomial>> solve_slices(const DerivationAction& act,
                                                          const std::vector<LieElement>& uprime, int w, int bound) {
  const auto& A = act.algebra();
  const RingPtr& R = act.ring();
  auto cands = A.standard_monomials(-w, bound);
  std::vector<std::vector<Polynomial>> imgs;
  for (const auto& xi : uprime) imgs.push_back(act.images_of(xi));
  std::map<std::pair<size_t, Exponents>, size_t> row_of;
  std::vector<std::vector<std::pair<size_t, Rational>>> cols(cands.size());
  for (size_t c = 0; c < cands.size(); ++c) {
    Polynomial m = Polynomial::monomial(R, cands[c], 1);
    for (size_t mu = 0; mu < uprime.size(); ++mu) {
      Polynomial v = apply_derivation_table(A, imgs[mu], m);
      for (const auto& [e, coef] : v.terms()) {
        auto key = std::make_pair(mu, e);
        auto it = row_of.find(key);
        size_t r = it == row_of.end() ? row_of.emplace(key, row_of.size()).first->second : it->second;
        cols[c].push_back({r, coef});
      }
    }
  }
  Exponents zero(R->nvars(), 0);
  for (size_t mu = 0; mu < uprime.size(); ++mu) row_of.emplace(std::make_pair(mu, zero), row_of.size());
  QMatrix M(row_of.size(), QVector(cands.size(), 0));
  for (size_t c = 0; c < cands.size(); ++c)
    for (const auto& [r, v] : cols[c]) M[r][c] += v;
  std::vector<Polynomial> out;
  for (size_t nu = 0; nu < uprime.size(); ++nu) {
    QVector b(row_of.size(), 0);
    b[row_of.at({nu, zero})] = 1;
    auto x = solve(M, b, cands.size());
    if (!x) return std::nullopt;
    Polynomial f(R);
    for (size_t c = 0; c < cands.size(); ++c)
      if ((*x)[c] != 0) f += Polynomial::monomial(R, cands[c], (*x)[c]);
    out.push_back(A.reduce(f));
  }
  return out;
}

}  // namespace detail

constexpr int kBasisChangeAttempts = 12;

// Slices for level i (1-based) of the action: tries splits along the given
// basis first, then seeded random basis changes of the level.
inline SliceSet find_slices(const DerivationAction& act, size_t i, int degree_bound, uint64_t seed = 0) {
  const auto& lie = act.lie();
  if (i < 1 || i > lie.nlevels()) throw std::out_of_range("level index out of range");
  auto m = relative_map(act, i);
  auto chain = fitting_chain(m);
  const int k = min_nonzero_fitting(chain);
  const auto basis = lie.level_basis(i - 1);
  const size_t r = basis.size(), t = r - static_cast<size_t>(k);
  const int w = lie.level_weight(i - 1);
  SliceSet s;
  s.level = i;
  s.degree_bound = degree_bound;
  auto attempt = [&](const std::vector<LieElement>& up, const std::vector<LieElement>& comp) {
    auto f = detail::solve_slices(act, up, w, degree_bound);
    if (!f) return false;
    s.uprime = up;
    s.complement = comp;
    s.f = *f;
    return true;
  };
  if (t == 0) {
    for (size_t j : basis) s.complement.push_back(lie.basis_vector(j));
    return s;
  }
  bool found = false;
  for_each_subset(r, t, [&](const std::vector<size_t>& pick) {
    if (found) return;
    std::vector<LieElement> up, comp;
    std::vector<bool> in(r, false);
    for (size_t p : pick) in[p] = true;
    for (size_t q = 0; q < r; ++q) (in[q] ? up : comp).push_back(lie.basis_vector(basis[q]));
    found = attempt(up, comp);
  });
  // One slice: small integer combinations, simplest first.
  if (t == 1 && r > 1) {
    std::vector<std::vector<int>> combos;
    std::vector<int> c(r, -2);
    while (true) {
      if (std::any_of(c.begin(), c.end(), [](int v) { return v != 0; })) combos.push_back(c);
      size_t q = 0;
      while (q < r && c[q] == 2) c[q++] = -2;
      if (q == r) break;
      c[q] += 1;
    }
    auto key = [](const std::vector<int>& v) {
      int mx = 0, nz = 0, neg = 0;
      for (int x : v) {
        mx = std::max(mx, std::abs(x));
        nz += x != 0;
        neg += x < 0;
      }
      std::vector<int> k{mx, nz, neg};
      for (int x : v) k.push_back(-x);
      return k;
    };
    std::sort(combos.begin(), combos.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    for (const auto& cv : combos) {
      size_t piv = 0;
      while (cv[piv] == 0) ++piv;
      std::vector<LieElement> up(1, lie.zero()), comp;
      for (size_t q = 0; q < r; ++q) up[0][basis[q]] = cv[q];
      for (size_t q = 0; q < r; ++q)
        if (q != piv) comp.push_back(lie.basis_vector(basis[q]));
      if ((found = attempt(up, comp))) break;
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(-2, 2);
  for (int a = 0; !found && a < kBasisChangeAttempts; ++a) {
    QMatrix M(r, QVector(r, 0));
    for (auto& row : M)
      for (auto& v : row) v = d(rng);
    if (rank(M, r) < r) continue;
    std::vector<LieElement> up, comp;
    for (size_t q = 0; q < r; ++q) {
      LieElement v = lie.zero();
      for (size_t c = 0; c < r; ++c) v[basis[c]] = M[q][c];
      (q < t ? up : comp).push_back(v);
    }
    found = attempt(up, comp);
  }
  if (!found) {
    if (chain.is_unit(k))
      throw BoundExhausted("no slice functions of weight " + std::to_string(-w) + " and degree <= " +
                               std::to_string(degree_bound) + " at level " + std::to_string(i),
                           degree_bound);
    throw Refusal("level " + std::to_string(i) + ": Fit_" + std::to_string(k) +
                  " is not the unit ideal, so no slice functions exist");
  }
  return s;
}

inline CommutingSlices commuting_slices(const DerivationAction& act, const SliceSet& s) {
  CommutingSlices cs{act.algebra(), {}, s.f};
  for (const auto& xi : s.uprime) cs.derivations.push_back(act.images_of(xi));
  return cs;
}

// Invariant subring A^{u'} presented on pi(x_k), with the reconstruction
// x_k = sum_n pi(xi^n x_k) f^n / n! as polynomials in those generators and
// formal slice variables.
struct QuotientStage {
  DerivationAction input;
  SliceSet slices;
  PresentedAlgebra invariants;
  std::vector<size_t> source;         // input generator projected by each invariant generator
  std::vector<Polynomial> inclusion;  // invariant generator -> input algebra
  RingPtr reconstruction_ring;        // invariant generators followed by F1..Ft
  std::vector<Polynomial> reconstruction;  // one per input generator
};

namespace detail {

inline std::string fresh_name(const std::vector<std::string>& taken, std::string base) {
  while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += "_";
  return base;
}

}  // namespace detail

inline QuotientStage invariant_presentation(const DerivationAction& act, const SliceSet& s) {
  QuotientStage st;
  st.input = act;
  st.slices = s;
  const auto& A = act.algebra();
  const auto& R = *act.ring();
  auto cs = commuting_slices(act, s);
  if (auto bad = check_slice_preconditions(cs)) throw VerificationFailure("slice precondition: " + *bad);
  std::vector<std::string> names;
  std::vector<int> weights;
  for (size_t g = 0; g < R.nvars(); ++g) {
    Polynomial p = dixmier_project(cs, Polynomial::variable(act.ring(), g));
    if (p.is_zero()) continue;
    st.source.push_back(g);
    st.inclusion.push_back(p);
    names.push_back(R.name(g));
    weights.push_back(R.weight(g));
  }
  OrderKind kind = R.custom() ? OrderKind::degrevlex : R.kind();
  // Graph ideal in (input vars, T vars); eliminate the input vars.
  std::vector<std::string> gnames = R.names();
  std::vector<int> gweights = R.weights();
  for (size_t k = 0; k < names.size(); ++k) {
    gnames.push_back(detail::fresh_name(gnames, "_T" + std::to_string(k)));
    gweights.push_back(weights[k]);
  }
  RingPtr G = GradedRing::make(gnames, gweights, kind);
  std::vector<size_t> embed_map(R.nvars());
  for (size_t g = 0; g < R.nvars(); ++g) embed_map[g] = g;
  std::vector<Polynomial> graph;
  for (const auto& r : A.relations().groebner_basis()) graph.push_back(r.embed(G, embed_map));
  std::vector<size_t> keep;
  for (size_t k = 0; k < names.size(); ++k) {
    keep.push_back(R.nvars() + k);
    graph.push_back(Polynomial::variable(G, R.nvars() + k) - st.inclusion[k].embed(G, embed_map));
  }
  Ideal sub = eliminate(Ideal(G, graph), keep);
  RingPtr B = GradedRing::make(names, weights, kind);
  std::vector<Polynomial> rels;
  for (const auto& p : sub.groebner_basis()) rels.push_back(Polynomial::from_terms(B, p.terms()));
  st.invariants = PresentedAlgebra(B, rels);

  // Reconstruction ring: invariant generators, then F1..Ft.
  std::vector<std::string> rnames = names;
  std::vector<int> rweights = weights;
  std::vector<size_t> fvars;
  for (size_t a = 0; a < s.f.size(); ++a) {
    fvars.push_back(rnames.size());
    rnames.push_back(detail::fresh_name(rnames, "F" + std::to_string(a + 1)));
    rweights.push_back(s.f[a].is_zero() ? 0 : s.f[a].min_weight());
  }
  st.reconstruction_ring = GradedRing::make(rnames, rweights, kind);
  std::vector<Polynomial> images(R.nvars(), Polynomial(st.reconstruction_ring));
  for (size_t k = 0; k < st.source.size(); ++k) images[st.source[k]] = Polynomial::variable(st.reconstruction_ring, k);
  for (size_t g = 0; g < R.nvars(); ++g)
    st.reconstruction.push_back(
        taylor_expansion(cs, Polynomial::variable(act.ring(), g), st.reconstruction_ring, images, fvars));
  return st;
}

// Action of u/u_1 on the invariants of level 1. Invariants h satisfy
// h = pi(h) = h(pi(x)), so images are rewritten by x_k -> T_k and then
// checked against the input action.
inline DerivationAction induced_action(const QuotientStage& st) {
  const auto& act = st.input;
  const RingPtr& B = st.invariants.ring();
  GradedLieAlgebra lie = act.lie().drop_top_levels(1);
  const size_t off = act.lie().dim() - lie.dim();
  std::vector<Polynomial> to_T(act.ring()->nvars(), Polynomial(B));
  for (size_t k = 0; k < st.source.size(); ++k) to_T[st.source[k]] = Polynomial::variable(B, k);
  std::vector<std::vector<Polynomial>> table(lie.dim());
  for (size_t j = 0; j < lie.dim(); ++j)
    for (size_t k = 0; k < st.inclusion.size(); ++k) {
      Polynomial v = act.apply(j + off, st.inclusion[k]);
      Polynomial img = st.invariants.reduce(v.substitute(B, to_T));
      if (!act.algebra().equal(img.substitute(act.ring(), st.inclusion), v))
        throw VerificationFailure(lie.name(j) + " . " + B->name(k) + " is not invariant under level 1");
      table[j].push_back(img);
    }
  return DerivationAction(st.invariants, lie, table);
}

struct QuotientChain {
  DerivationAction original;
  std::vector<QuotientStage> stages;

  const PresentedAlgebra& result() const {
    return stages.empty() ? original.algebra() : stages.back().invariants;
  }
  size_t fibre_dimension() const {
    size_t m = 0;
    for (const auto& s : stages) m += s.slices.f.size();
    return m;
  }
};

struct QuotientOptions {
  int degree_bound = 4;
  uint64_t seed = 0;
};

inline QuotientChain staged_quotient(const DerivationAction& act, const QuotientOptions& opt = {}) {
  QuotientChain chain;
  chain.original = act;
  if (!act.ring()->all_weights_nonpositive()) throw Refusal("quotient needs all ring weights <= 0");
  auto cdrs = check_cdrs(act);
  if (!cdrs.holds) {
    for (const auto& l : cdrs.levels)
      if (!l.holds())
        throw Refusal("CDRS fails at level " + std::to_string(l.level) + "; run blowup first");
  }
  if (cdrs.empty_chart) return chain;
  DerivationAction cur = act;
  for (size_t i = 1; i <= act.lie().nlevels(); ++i) {
    auto c = check_cdrs(cur);
    if (!c.holds) throw VerificationFailure("stage " + std::to_string(i) + ": induced action fails CDRS");
    SliceSet s;
    try {
      s = find_slices(cur, 1, opt.degree_bound, opt.seed + i);
    } catch (const BoundExhausted& e) {
      throw BoundExhausted("stage " + std::to_string(i) + ": " + e.what(), e.bound);
    } catch (const Refusal& e) {
      throw Refusal("stage " + std::to_string(i) + ": " + e.what());
    }
    s.level = i;
    chain.stages.push_back(invariant_presentation(cur, s));
    if (i < act.lie().nlevels()) cur = induced_action(chain.stages.back());
  }
  return chain;
}

struct QuotientReport {
  bool ok = true;
  std::vector<std::string> failures;
  size_t checks = 0;
  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond) {
      ok = false;
      failures.push_back(what);
    }
  }
};

// (a) invariants are killed by the whole level, (b) det(xi_mu . f_nu) is a
// unit, (c) reconstruction identities, (d) the presentation relations equal
// the kernel of T -> pi(x), (e) consecutive stages fit together.
inline QuotientReport verify_quotient(const QuotientChain& chain) {
  QuotientReport rep;
  for (size_t si = 0; si < chain.stages.size(); ++si) {
    const auto& st = chain.stages[si];
    const auto& act = st.input;
    const auto& A = act.algebra();
    const std::string tag = "stage " + std::to_string(si + 1) + ": ";
    for (size_t j : act.lie().level_basis(0))
      for (size_t k = 0; k < st.inclusion.size(); ++k) {
        Polynomial v = act.apply(j, st.inclusion[k]);
        rep.expect(v.is_zero(), tag + act.lie().name(j) + " . " + st.invariants.ring()->name(k) + " = " + v.to_string());
      }
    const size_t t = st.slices.f.size();
    std::vector<std::vector<Polynomial>> D(t, std::vector<Polynomial>(t, Polynomial(act.ring())));
    for (size_t mu = 0; mu < t; ++mu)
      for (size_t nu = 0; nu < t; ++nu) D[mu][nu] = act.apply(st.slices.uprime[mu], st.slices.f[nu]);
    Polynomial det = A.reduce(determinant(D, act.ring()));
    rep.expect(det.is_constant() && !det.is_zero(), tag + "det(xi.f) = " + det.to_string() + " is not a unit");

    std::vector<Polynomial> back = st.inclusion;
    for (const auto& f : st.slices.f) back.push_back(f);
    for (size_t g = 0; g < st.reconstruction.size() && g < act.ring()->nvars(); ++g) {
      Polynomial v = st.reconstruction[g].substitute(act.ring(), back);
      rep.expect(A.equal(v, Polynomial::variable(act.ring(), g)),
                 tag + "reconstruction of " + act.ring()->name(g) + " fails");
    }
    rep.expect(st.reconstruction.size() == act.ring()->nvars(), tag + "reconstruction list incomplete");

    for (const auto& r : st.invariants.relations().generators())
      rep.expect(A.is_zero(r.substitute(act.ring(), st.inclusion)), tag + "relation " + r.to_string() + " does not hold");
    QuotientStage fresh = invariant_presentation(act, st.slices);
    rep.expect(fresh.invariants.relations().same_ideal(st.invariants.relations()),
               tag + "presentation relations differ from the recomputed kernel");

    if (si + 1 < chain.stages.size()) {
      const auto& next = chain.stages[si + 1].input;
      rep.expect(same_ring(next.ring(), st.invariants.ring()) &&
                     next.algebra().relations().same_ideal(st.invariants.relations()),
                 tag + "next stage input differs from this stage's invariant ring");
      const size_t off = act.lie().dim() - next.lie().dim();
      for (size_t j = 0; j < next.lie().dim(); ++j)
        for (size_t k = 0; k < st.inclusion.size(); ++k) {
          Polynomial down = next.image(j, k).substitute(act.ring(), st.inclusion);
          rep.expect(A.equal(down, act.apply(j + off, st.inclusion[k])),
                     tag + next.lie().name(j) + " does not descend on " + st.invariants.ring()->name(k));
        }
    }
  }
  return rep;
}

}  // namespace nrgit
