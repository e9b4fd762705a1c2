#pragma once

#include <algorithm>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrgit/polynomial.hpp"

namespace nrgit {

namespace detail {

inline int lead_tag(const Polynomial& p) {
  const auto& r = *p.ring();
  const auto& e = p.lead_exp();
  for (size_t i = 0; i < e.size(); ++i)
    if (e[i] > 0 && r.is_tag(i)) return static_cast<int>(i);
  return -1;
}

inline const Polynomial* find_divisor(const Exponents& e, const std::vector<Polynomial>& G) {
  for (const auto& g : G)
    if (divides(g.lead_exp(), e)) return &g;
  return nullptr;
}

}  // namespace detail

// Full reduction of p by the list G (any order of G; not necessarily a basis).
inline Polynomial reduce(const Polynomial& p, const std::vector<Polynomial>& G) {
  if (G.empty() || p.is_zero()) return p;
  const auto& ord = p.ring()->order();
  std::vector<Polynomial::Term> cur = p.terms();
  std::vector<Polynomial::Term> rem;
  size_t start = 0;
  while (start < cur.size()) {
    const Exponents& e = cur[start].first;
    const Polynomial* g = detail::find_divisor(e, G);
    if (!g) {
      rem.push_back(cur[start]);
      ++start;
      continue;
    }
    Exponents shift = exp_sub(e, g->lead_exp());
    Rational f = -cur[start].second / g->lead_coeff();
    cur = Polynomial::merge(cur, start, g->terms(), f, &shift, ord);
    start = 0;
  }
  return Polynomial::from_terms(p.ring(), rem);
}

// Reduced, monic Groebner basis sorted by increasing leading monomial.
// Pairs whose leading monomials carry different module tags are skipped, so
// tagged inputs produce module Groebner bases.
inline std::vector<Polynomial> groebner(const std::vector<Polynomial>& input) {
  std::vector<Polynomial> G;
  RingPtr ring;
  for (const auto& f : input) {
    if (f.is_zero()) continue;
    ring = f.ring();
    G.push_back(f.monic());
  }
  if (G.empty()) return {};
  const auto& ord = ring->order();
  for (const auto& g : G)
    if (g.is_constant()) return {Polynomial::constant(ring, 1)};

  struct Pair {
    size_t i, j;
    Exponents lcm;
  };
  std::vector<Pair> pairs;
  std::vector<std::vector<char>> pending;
  auto is_pending = [&](size_t a, size_t b) {
    if (a > b) std::swap(a, b);
    return pending[b][a] != 0;
  };
  auto add_pairs_for = [&](size_t k) {
    pending.emplace_back(k, 0);
    int tk = detail::lead_tag(G[k]);
    for (size_t i = 0; i < k; ++i) {
      if (detail::lead_tag(G[i]) != tk) continue;
      if (tk < 0 && coprime(G[i].lead_exp(), G[k].lead_exp())) continue;
      pairs.push_back({i, k, exp_lcm(G[i].lead_exp(), G[k].lead_exp())});
      pending[k][i] = 1;
    }
  };
  {
    std::vector<Polynomial> init = std::move(G);
    G.clear();
    for (auto& f : init) {
      Polynomial h = reduce(f, G);
      if (h.is_zero()) continue;
      if (h.is_constant()) return {Polynomial::constant(ring, 1)};
      G.push_back(h.monic());
      add_pairs_for(G.size() - 1);
    }
  }

  while (!pairs.empty()) {
    size_t best = 0;
    for (size_t k = 1; k < pairs.size(); ++k) {
      int c = ord.compare(pairs[k].lcm, pairs[best].lcm);
      if (c < 0 || (c == 0 && (pairs[k].j < pairs[best].j ||
                               (pairs[k].j == pairs[best].j && pairs[k].i < pairs[best].i))))
        best = k;
    }
    Pair pr = pairs[best];
    pairs.erase(pairs.begin() + static_cast<long>(best));
    pending[pr.j][pr.i] = 0;

    bool chain = false;
    for (size_t k = 0; k < G.size() && !chain; ++k) {
      if (k == pr.i || k == pr.j) continue;
      if (!divides(G[k].lead_exp(), pr.lcm)) continue;
      if (!is_pending(pr.i, k) && !is_pending(pr.j, k)) chain = true;
    }
    if (chain) continue;

    const Polynomial& a = G[pr.i];
    const Polynomial& b = G[pr.j];
    Exponents sa = exp_sub(pr.lcm, a.lead_exp());
    Exponents sb = exp_sub(pr.lcm, b.lead_exp());
    Polynomial s = a.mul_term(sa, 1).axpy(b, -1, &sb);
    Polynomial h = reduce(s, G);
    if (h.is_zero()) continue;
    if (h.is_constant()) return {Polynomial::constant(ring, 1)};
    G.push_back(h.monic());
    add_pairs_for(G.size() - 1);
  }

  // Minimalize, then interreduce.
  std::sort(G.begin(), G.end(), [&](const Polynomial& x, const Polynomial& y) {
    return ord.compare(x.lead_exp(), y.lead_exp()) < 0;
  });
  std::vector<Polynomial> minimal;
  for (size_t k = 0; k < G.size(); ++k) {
    bool redundant = false;
    for (size_t l = 0; l < G.size() && !redundant; ++l) {
      if (l == k) continue;
      if (divides(G[l].lead_exp(), G[k].lead_exp()) && (G[l].lead_exp() != G[k].lead_exp() || l < k))
        redundant = true;
    }
    if (!redundant) minimal.push_back(G[k]);
  }
  std::vector<Polynomial> out;
  for (size_t k = 0; k < minimal.size(); ++k) {
    std::vector<Polynomial> others;
    for (size_t l = 0; l < minimal.size(); ++l)
      if (l != k) others.push_back(minimal[l]);
    out.push_back(reduce(minimal[k], others).monic());
  }
  std::sort(out.begin(), out.end(), [&](const Polynomial& x, const Polynomial& y) {
    return ord.compare(x.lead_exp(), y.lead_exp()) < 0;
  });
  return out;
}

// Ideal with a lazily computed, shared, reduced Groebner basis.
class Ideal {
 public:
  Ideal() = default;
  explicit Ideal(RingPtr r, std::vector<Polynomial> gens = {})
      : ring_(std::move(r)), gens_(std::move(gens)), cache_(std::make_shared<Cache>()) {
    for (const auto& g : gens_)
      if (!same_ring(g.ring(), ring_)) throw std::invalid_argument("ideal generator from another ring");
  }

  const RingPtr& ring() const { return ring_; }
  const std::vector<Polynomial>& generators() const { return gens_; }

  const std::vector<Polynomial>& groebner_basis() const {
    std::call_once(cache_->flag, [this] {
      std::vector<Polynomial> gs;
      for (const auto& g : gens_) gs.push_back(g.in_ring(ring_));
      cache_->gb = groebner(gs);
    });
    return cache_->gb;
  }

  Polynomial normal_form(const Polynomial& p) const { return reduce(p.in_ring(ring_), groebner_basis()); }
  bool contains(const Polynomial& p) const { return normal_form(p).is_zero(); }
  bool is_unit() const {
    const auto& gb = groebner_basis();
    return gb.size() == 1 && gb[0].is_constant() && !gb[0].is_zero();
  }
  bool is_zero() const { return groebner_basis().empty(); }
  bool contains_ideal(const Ideal& o) const {
    for (const auto& g : o.gens_)
      if (!contains(g)) return false;
    return true;
  }
  bool same_ideal(const Ideal& o) const { return groebner_basis() == o.groebner_basis(); }

  Ideal operator+(const Ideal& o) const {
    std::vector<Polynomial> g = gens_;
    for (const auto& p : o.gens_) g.push_back(p.in_ring(ring_));
    return Ideal(ring_, g);
  }
  Ideal operator*(const Ideal& o) const {
    std::vector<Polynomial> g;
    for (const auto& a : gens_)
      for (const auto& b : o.gens_) g.push_back(a * b.in_ring(ring_));
    return Ideal(ring_, g);
  }

  static Ideal unit(const RingPtr& r) { return Ideal(r, {Polynomial::constant(r, 1)}); }

 private:
  struct Cache {
    std::once_flag flag;
    std::vector<Polynomial> gb;
  };
  RingPtr ring_;
  std::vector<Polynomial> gens_;
  std::shared_ptr<Cache> cache_;
};

inline std::vector<Polynomial> groebner_basis(const Ideal& I) { return I.groebner_basis(); }
inline Polynomial normal_form(const Polynomial& p, const Ideal& I) { return I.normal_form(p); }
inline bool is_unit_ideal(const Ideal& I) { return I.is_unit(); }

// Same variables, an order that eliminates the variables flagged in `drop`.
inline RingPtr elimination_ring(const RingPtr& base, const std::vector<bool>& drop) {
  std::vector<long> row(base->nvars(), 0);
  for (size_t i = 0; i < drop.size(); ++i) row[i] = drop[i] ? 1 : 0;
  std::vector<bool> tags(base->nvars());
  for (size_t i = 0; i < base->nvars(); ++i) tags[i] = base->is_tag(i);
  return GradedRing::make_custom(base->names(), base->weights(), MonomialOrder({row}, MonomialOrder::Base::degrevlex),
                                 tags);
}

// Groebner basis elements free of the dropped variables, kept in the input ring.
inline std::vector<Polynomial> eliminate_in_ring(const Ideal& I, const std::vector<bool>& drop) {
  RingPtr er = elimination_ring(I.ring(), drop);
  std::vector<Polynomial> gens;
  for (const auto& g : I.generators()) gens.push_back(g.in_ring(er));
  std::vector<Polynomial> out;
  for (const auto& g : groebner(gens)) {
    bool free = true;
    for (const auto& t : g.terms())
      for (size_t i = 0; i < drop.size() && free; ++i)
        if (drop[i] && t.first[i] > 0) free = false;
    if (free) out.push_back(g.in_ring(I.ring()));
  }
  return out;
}

// ideal ∩ k[keep], returned in the subring on the kept variables.
inline Ideal eliminate(const Ideal& I, const std::vector<size_t>& keep) {
  const auto& R = *I.ring();
  std::vector<bool> drop(R.nvars(), true);
  for (size_t k : keep) drop[k] = false;
  std::vector<std::string> names;
  std::vector<int> weights;
  std::vector<size_t> pos(R.nvars(), 0);
  for (size_t i = 0; i < R.nvars(); ++i)
    if (!drop[i]) {
      pos[i] = names.size();
      names.push_back(R.name(i));
      weights.push_back(R.weight(i));
    }
  OrderKind kind = R.custom() ? OrderKind::degrevlex : R.kind();
  RingPtr sub = GradedRing::make(names, weights, kind);
  std::vector<Polynomial> out;
  for (const auto& g : eliminate_in_ring(I, drop)) {
    std::vector<Polynomial::Term> ts;
    for (const auto& [e, c] : g.terms()) {
      Exponents f(names.size(), 0);
      for (size_t i = 0; i < R.nvars(); ++i)
        if (!drop[i]) f[pos[i]] = e[i];
      ts.emplace_back(std::move(f), c);
    }
    out.push_back(Polynomial::from_terms(sub, ts));
  }
  return Ideal(sub, out);
}

// Matrix of polynomials: codomain_rank rows, domain_rank columns.
struct FreeModuleMap {
  RingPtr ring;
  size_t codomain_rank = 0;
  size_t domain_rank = 0;
  std::vector<std::vector<Polynomial>> matrix;

  FreeModuleMap() = default;
  FreeModuleMap(RingPtr r, size_t rows, size_t cols)
      : ring(std::move(r)), codomain_rank(rows), domain_rank(cols),
        matrix(rows, std::vector<Polynomial>(cols, Polynomial(ring))) {}

  std::vector<Polynomial> column(size_t j) const {
    std::vector<Polynomial> c;
    for (size_t i = 0; i < codomain_rank; ++i) c.push_back(matrix[i][j]);
    return c;
  }
  std::vector<Polynomial> apply(const std::vector<Polynomial>& v) const {
    std::vector<Polynomial> out(codomain_rank, Polynomial(ring));
    for (size_t i = 0; i < codomain_rank; ++i)
      for (size_t j = 0; j < domain_rank; ++j) out[i] += matrix[i][j] * v[j];
    return out;
  }
};

namespace detail {

// Base variables followed by `ne` eliminated tags and `ns` plain tags. The
// order ranks anything carrying an eliminated tag above everything else.
struct TagRing {
  RingPtr base;
  RingPtr ring;
  size_t ne = 0, ns = 0;

  TagRing(RingPtr b, size_t e, size_t s) : base(std::move(b)), ne(e), ns(s) {
    std::vector<std::string> names = base->names();
    std::vector<int> weights = base->weights();
    std::vector<bool> tags(base->nvars(), false);
    std::vector<long> row(base->nvars(), 0);
    for (size_t k = 0; k < ne; ++k) {
      names.push_back("_E" + std::to_string(k));
      weights.push_back(0);
      tags.push_back(true);
      row.push_back(1);
    }
    for (size_t k = 0; k < ns; ++k) {
      names.push_back("_S" + std::to_string(k));
      weights.push_back(0);
      tags.push_back(true);
      row.push_back(0);
    }
    std::vector<std::vector<long>> rows;
    if (ne > 0 && ns > 0) rows.push_back(row);
    ring = GradedRing::make_custom(names, weights, MonomialOrder(rows, MonomialOrder::Base::degrevlex), tags);
  }

  size_t e_index(size_t k) const { return base->nvars() + k; }
  size_t s_index(size_t k) const { return base->nvars() + ne + k; }

  Polynomial lift(const Polynomial& p, size_t tag_var) const {
    std::vector<Polynomial::Term> ts;
    for (const auto& [e, c] : p.terms()) {
      Exponents f(ring->nvars(), 0);
      std::copy(e.begin(), e.end(), f.begin());
      f[tag_var] = 1;
      ts.emplace_back(std::move(f), c);
    }
    return Polynomial::from_terms(ring, ts);
  }
  Polynomial encode(const std::vector<Polynomial>& evec, const std::vector<Polynomial>& svec) const {
    Polynomial r(ring);
    for (size_t k = 0; k < evec.size(); ++k) r += lift(evec[k], e_index(k));
    for (size_t k = 0; k < svec.size(); ++k) r += lift(svec[k], s_index(k));
    return r;
  }
  // Component of p along the given tag, as a base-ring polynomial.
  Polynomial component(const Polynomial& p, size_t tag_var) const {
    std::vector<Polynomial::Term> ts;
    for (const auto& [e, c] : p.terms()) {
      if (e[tag_var] == 0) continue;
      ts.emplace_back(Exponents(e.begin(), e.begin() + static_cast<long>(base->nvars())), c);
    }
    return Polynomial::from_terms(base, ts);
  }
  bool has_e(const Polynomial& p) const {
    for (const auto& t : p.terms())
      for (size_t k = 0; k < ne; ++k)
        if (t.first[e_index(k)] > 0) return true;
    return false;
  }
};

}  // namespace detail

// Generators of ker(M) over A = R/relations. Every vector v returned has
// M·v ≡ 0 modulo the relations, and entries are reduced modulo the relations.
inline std::vector<std::vector<Polynomial>> syzygy_kernel(const FreeModuleMap& M, const Ideal* relations = nullptr) {
  const size_t n = M.codomain_rank, m = M.domain_rank;
  std::vector<std::vector<Polynomial>> out;
  if (m == 0) return out;
  auto nf = [&](const Polynomial& p) { return relations ? relations->normal_form(p) : p; };
  if (n == 0) {
    for (size_t j = 0; j < m; ++j) {
      std::vector<Polynomial> v(m, Polynomial(M.ring));
      v[j] = Polynomial::constant(M.ring, 1);
      out.push_back(v);
    }
    return out;
  }
  detail::TagRing tr(M.ring, n, m);
  std::vector<Polynomial> gens;
  for (size_t j = 0; j < m; ++j) {
    std::vector<Polynomial> sv(m, Polynomial(M.ring));
    sv[j] = Polynomial::constant(M.ring, 1);
    std::vector<Polynomial> col;
    for (size_t i = 0; i < n; ++i) col.push_back(nf(M.matrix[i][j]));
    gens.push_back(tr.encode(col, sv));
  }
  if (relations)
    for (const auto& g : relations->groebner_basis())
      for (size_t k = 0; k < n; ++k) gens.push_back(tr.lift(g, tr.e_index(k)));
  for (const auto& g : groebner(gens)) {
    if (tr.has_e(g)) continue;
    std::vector<Polynomial> v;
    bool nonzero = false;
    for (size_t j = 0; j < m; ++j) {
      v.push_back(nf(tr.component(g, tr.s_index(j))));
      if (!v.back().is_zero()) nonzero = true;
    }
    if (nonzero && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

// Cofactors c with Σ c_j gens_j ≡ f modulo relations, or nullopt if f is not
// in the ideal generated by gens (plus relations).
inline std::optional<std::vector<Polynomial>> lift(const Polynomial& f, const std::vector<Polynomial>& gens,
                                                   const Ideal* relations = nullptr) {
  const RingPtr& R = f.ring();
  const size_t m = gens.size();
  detail::TagRing tr(R, 1, m);
  std::vector<Polynomial> in;
  for (size_t j = 0; j < m; ++j) {
    std::vector<Polynomial> sv(m, Polynomial(R));
    sv[j] = Polynomial::constant(R, 1);
    in.push_back(tr.encode({gens[j]}, sv));
  }
  if (relations)
    for (const auto& g : relations->groebner_basis()) in.push_back(tr.lift(g, tr.e_index(0)));
  auto G = groebner(in);
  Polynomial r = reduce(tr.lift(f, tr.e_index(0)), G);
  if (tr.has_e(r)) return std::nullopt;
  std::vector<Polynomial> c;
  for (size_t j = 0; j < m; ++j) {
    Polynomial cj = -tr.component(r, tr.s_index(j));
    c.push_back(relations ? relations->normal_form(cj) : cj);
  }
  return c;
}

// Submodule of A^n (A = R/relations) given by generating vectors.
class Submodule {
 public:
  Submodule(RingPtr r, size_t rank, std::vector<std::vector<Polynomial>> gens, const Ideal* relations = nullptr)
      : tr_(r, 0, rank), rank_(rank), gens_(std::move(gens)) {
    std::vector<Polynomial> in;
    for (const auto& v : gens_) in.push_back(tr_.encode({}, v));
    if (relations)
      for (const auto& g : relations->groebner_basis())
        for (size_t k = 0; k < rank_; ++k) in.push_back(tr_.lift(g, tr_.s_index(k)));
    gb_ = groebner(in);
  }

  bool contains(const std::vector<Polynomial>& v) const { return reduce(tr_.encode({}, v), gb_).is_zero(); }
  bool contains_all(const std::vector<std::vector<Polynomial>>& vs) const {
    for (const auto& v : vs)
      if (!contains(v)) return false;
    return true;
  }
  bool is_everything() const {
    for (size_t k = 0; k < rank_; ++k) {
      std::vector<Polynomial> e(rank_, Polynomial(tr_.base));
      e[k] = Polynomial::constant(tr_.base, 1);
      if (!contains(e)) return false;
    }
    return true;
  }
  size_t rank() const { return rank_; }
  const std::vector<std::vector<Polynomial>>& generators() const { return gens_; }

 private:
  detail::TagRing tr_;
  size_t rank_;
  std::vector<std::vector<Polynomial>> gens_;
  std::vector<Polynomial> gb_;
};

}  // namespace nrgit
