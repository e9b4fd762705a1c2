#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrgit/action.hpp"
#include "nrgit/linalg.hpp"

namespace nrgit {

// Rows: Lie basis vectors of u_i (levels 1..i), columns: generators g.
// entry[r][g] = xi_r . g.
struct InfinitesimalMatrix {
  RingPtr ring;
  std::vector<size_t> rows;
  std::vector<std::vector<Polynomial>> entries;
};

// Basis indices of u_i, the span of the first `levels` levels.
inline std::vector<size_t> filtration_basis(const GradedLieAlgebra& lie, size_t levels) {
  std::vector<size_t> out;
  for (size_t j = 0; j < lie.dim(); ++j)
    if (lie.level_of(j) < levels) out.push_back(j);
  return out;
}

inline InfinitesimalMatrix infinitesimal_matrix(const DerivationAction& act, size_t levels) {
  InfinitesimalMatrix m;
  m.ring = act.ring();
  m.rows = filtration_basis(act.lie(), levels);
  for (size_t j : m.rows) m.entries.push_back(act.table()[j]);
  return m;
}

inline InfinitesimalMatrix full_infinitesimal_matrix(const DerivationAction& act) {
  return infinitesimal_matrix(act, act.lie().nlevels());
}

// phi_i : K_{i-1} -> (u_i/u_{i-1})* (x) A. Domain generators are vectors over
// the differentials dg; pairing[mu][k] = <xi_mu, omega_k>.
struct PresentedModuleMap {
  PresentedAlgebra algebra;
  std::vector<std::vector<Polynomial>> domain_generators;
  std::vector<size_t> target_basis;
  std::vector<std::vector<Polynomial>> pairing;

  size_t target_rank() const { return target_basis.size(); }
  size_t domain_size() const { return domain_generators.size(); }
};

inline Polynomial pair_with(const DerivationAction& act, size_t j, const std::vector<Polynomial>& omega) {
  Polynomial s(act.ring());
  for (size_t g = 0; g < omega.size(); ++g)
    if (!omega[g].is_zero() && !act.image(j, g).is_zero()) s += omega[g] * act.image(j, g);
  return act.algebra().reduce(s);
}

inline std::vector<std::vector<Polynomial>> pairing_matrix(const DerivationAction& act, const std::vector<size_t>& rows,
                                                           const std::vector<std::vector<Polynomial>>& domain) {
  std::vector<std::vector<Polynomial>> out(rows.size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (const auto& w : domain) out[r].push_back(pair_with(act, rows[r], w));
  return out;
}

// Generators of K_{i-1} = ker(Omega -> u_{i-1}* (x) A); K_0 is free on the dg.
inline std::vector<std::vector<Polynomial>> relative_kernel(const DerivationAction& act, size_t i) {
  const size_t n = act.algebra().ngens();
  if (i <= 1) {
    std::vector<std::vector<Polynomial>> out;
    for (size_t g = 0; g < n; ++g) {
      std::vector<Polynomial> v(n, Polynomial(act.ring()));
      v[g] = Polynomial::constant(act.ring(), 1);
      out.push_back(v);
    }
    return out;
  }
  auto prev = infinitesimal_matrix(act, i - 1);
  FreeModuleMap M(act.ring(), prev.rows.size(), n);
  M.matrix = prev.entries;
  return syzygy_kernel(M, &act.algebra().relations());
}

inline PresentedModuleMap relative_map(const DerivationAction& act, size_t i) {
  if (i < 1 || i > act.lie().nlevels()) throw std::out_of_range("level index out of range");
  PresentedModuleMap m;
  m.algebra = act.algebra();
  m.domain_generators = relative_kernel(act, i);
  m.target_basis = act.lie().level_basis(i - 1);
  m.pairing = pairing_matrix(act, m.target_basis, m.domain_generators);
  return m;
}

// Fit_k for k = -1 .. target_rank, as minors reduced modulo the relations.
class FittingChain {
 public:
  FittingChain() = default;
  FittingChain(PresentedAlgebra A, size_t rank, std::vector<std::vector<Polynomial>> gens)
      : A_(std::move(A)), rank_(rank), gens_(std::move(gens)) {}

  size_t target_rank() const { return rank_; }
  const PresentedAlgebra& algebra() const { return A_; }

  const std::vector<Polynomial>& generators(int k) const {
    static const std::vector<Polynomial> none;
    if (k < 0) return none;
    return gens_[static_cast<size_t>(std::min<int>(k, static_cast<int>(rank_)))];
  }
  // Ideal of the ambient ring: minors plus relations.
  Ideal ideal(int k) const { return A_.ideal(generators(k)); }
  bool is_zero(int k) const {
    for (const auto& g : generators(k))
      if (!A_.is_zero(g)) return false;
    return true;
  }
  bool is_unit(int k) const {
    if (k >= static_cast<int>(rank_)) return true;
    return ideal(k).is_unit();
  }

 private:
  PresentedAlgebra A_;
  size_t rank_ = 0;
  std::vector<std::vector<Polynomial>> gens_;  // index k = 0 .. rank
};

inline FittingChain fitting_chain_of(const PresentedAlgebra& A, const std::vector<std::vector<Polynomial>>& matrix,
                                     size_t rows, size_t cols) {
  std::vector<std::vector<Polynomial>> gens;
  for (size_t k = 0; k <= rows; ++k) {
    std::vector<Polynomial> g;
    for (auto& m : minors(matrix, rows, cols, rows - k, A.ring())) {
      Polynomial r = A.reduce(m);
      if (!r.is_zero() && std::find(g.begin(), g.end(), r) == g.end()) g.push_back(r);
    }
    gens.push_back(g);
  }
  return FittingChain(A, rows, gens);
}

inline FittingChain fitting_chain(const PresentedModuleMap& m) {
  return fitting_chain_of(m.algebra, m.pairing, m.target_rank(), m.domain_size());
}

inline int min_nonzero_fitting(const FittingChain& c) {
  for (int k = 0; k < static_cast<int>(c.target_rank()); ++k)
    if (!c.is_zero(k)) return k;
  return static_cast<int>(c.target_rank());
}

// Rational point of Spec A.
using PointEval = std::vector<Rational>;

struct PointError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline void check_point(const PresentedAlgebra& A, const PointEval& x) {
  if (x.size() != A.ngens()) throw PointError("point has " + std::to_string(x.size()) + " coordinates, expected " +
                                              std::to_string(A.ngens()));
  for (const auto& r : A.relations().generators())
    if (r.evaluate(x) != 0) throw PointError("point violates relation " + r.to_string());
}

inline QMatrix evaluate_matrix(const std::vector<std::vector<Polynomial>>& m, const PointEval& x) {
  QMatrix out;
  for (const auto& row : m) {
    QVector r;
    for (const auto& e : row) r.push_back(e.evaluate(x));
    out.push_back(r);
  }
  return out;
}

struct Stabiliser {
  size_t dimension = 0;
  std::vector<LieElement> basis;  // in full Lie coordinates
};

// Stab_v(x) for v = u_levels: vectors c with sum_r c_r (xi_r . g)(x) = 0 for all g.
inline Stabiliser stabiliser_at_point(const DerivationAction& act, size_t levels, const PointEval& x) {
  check_point(act.algebra(), x);
  auto m = infinitesimal_matrix(act, levels);
  QMatrix ev = evaluate_matrix(m.entries, x);
  Stabiliser s;
  for (const auto& v : left_nullspace(ev, m.rows.size(), act.algebra().ngens())) {
    LieElement xi = act.lie().zero();
    for (size_t r = 0; r < m.rows.size(); ++r) xi[m.rows[r]] = v[r];
    s.basis.push_back(xi);
  }
  s.dimension = s.basis.size();
  return s;
}

struct FittingSelfCheckError : std::logic_error {
  using std::logic_error::logic_error;
};

// dim coker(x* phi_i); asserts dim > k <=> Fit_k(phi_i) vanishes at x for all k.
inline size_t relative_stabiliser_dim(const PresentedModuleMap& m, const FittingChain& chain, const PointEval& x) {
  check_point(m.algebra, x);
  const size_t r = m.target_rank();
  if (r == 0) return 0;
  size_t rk = rank(evaluate_matrix(m.pairing, x), m.domain_size());
  size_t dim = r - rk;
  for (int k = 0; k <= static_cast<int>(r); ++k) {
    bool vanish = true;
    for (const auto& g : chain.generators(k))
      if (g.evaluate(x) != 0) vanish = false;
    if (k == static_cast<int>(r)) vanish = false;
    if ((static_cast<int>(dim) > k) != vanish)
      throw FittingSelfCheckError("Fitting criterion disagrees with evaluated rank at k=" + std::to_string(k));
  }
  return dim;
}

inline size_t relative_stabiliser_dim(const DerivationAction& act, size_t i, const PointEval& x) {
  auto m = relative_map(act, i);
  return relative_stabiliser_dim(m, fitting_chain(m), x);
}

struct SsEqSReport {
  bool holds = false;
  bool empty_chart = false;
  std::vector<Polynomial> fit0;        // generators (maximal minors)
  std::vector<Polynomial> certificate;  // 1 = sum certificate[j] * fit0[j] mod relations
};

// ss = s on the chart iff Fit_0 of the full infinitesimal action is the unit ideal.
inline SsEqSReport check_ss_eq_s(const DerivationAction& act) {
  SsEqSReport rep;
  const auto& A = act.algebra();
  if (A.is_zero_ring()) {
    rep.holds = rep.empty_chart = true;
    return rep;
  }
  auto m = full_infinitesimal_matrix(act);
  auto chain = fitting_chain_of(A, m.entries, m.rows.size(), A.ngens());
  rep.fit0 = chain.generators(0);
  rep.holds = chain.is_unit(0);
  if (rep.holds) {
    auto c = lift(Polynomial::constant(A.ring(), 1), rep.fit0, &A.relations());
    if (!c) throw std::logic_error("unit Fit_0 without a lift of 1");
    rep.certificate = *c;
  }
  return rep;
}

struct CdrsLevel {
  size_t level = 0;  // 1-based
  size_t target_rank = 0;
  int k = 0;
  bool lower_zero = true;  // Fit_{k-1} = 0
  bool unit = true;        // Fit_k = <1>
  std::vector<Polynomial> fit_k;
  std::vector<Polynomial> fit_k_minus_1;
  bool holds() const { return lower_zero && unit; }
};

struct CdrsReport {
  bool holds = true;
  bool empty_chart = false;
  std::vector<CdrsLevel> levels;
};

inline CdrsReport check_cdrs(const DerivationAction& act) {
  CdrsReport rep;
  if (act.algebra().is_zero_ring()) {
    rep.empty_chart = true;
    return rep;
  }
  for (size_t i = 1; i <= act.lie().nlevels(); ++i) {
    auto m = relative_map(act, i);
    auto chain = fitting_chain(m);
    CdrsLevel l;
    l.level = i;
    l.target_rank = m.target_rank();
    l.k = min_nonzero_fitting(chain);
    l.lower_zero = chain.is_zero(l.k - 1);
    l.unit = chain.is_unit(l.k);
    l.fit_k = chain.generators(l.k);
    l.fit_k_minus_1 = chain.generators(l.k - 1);
    if (!l.holds()) rep.holds = false;
    rep.levels.push_back(l);
  }
  return rep;
}

struct SnakeReport {
  bool exact = true;
  std::vector<std::string> failures;
};

// coker(phi_i) -> Q(u_i) -> Q(u_{i-1}) -> 0, checked by submodule containment.
// Q(v) = v* (x) A / image of Omega.
inline SnakeReport verify_snake_exactness(const DerivationAction& act, size_t i) {
  SnakeReport rep;
  const auto& A = act.algebra();
  const RingPtr& R = act.ring();
  const Ideal* rel = &A.relations();
  const size_t n = A.ngens();
  auto Mi = infinitesimal_matrix(act, i);
  auto Mp = infinitesimal_matrix(act, i - 1);
  const size_t di = Mi.rows.size(), dp = Mp.rows.size();
  auto phi = relative_map(act, i);
  // u_{i-1} rows come first in u_i.
  auto unit_vec = [&](size_t len, size_t k) {
    std::vector<Polynomial> v(len, Polynomial(R));
    v[k] = Polynomial::constant(R, 1);
    return v;
  };
  auto columns = [&](const InfinitesimalMatrix& m) {
    std::vector<std::vector<Polynomial>> cols;
    for (size_t g = 0; g < n; ++g) {
      std::vector<Polynomial> c;
      for (const auto& row : m.entries) c.push_back(row[g]);
      cols.push_back(c);
    }
    return cols;
  };
  auto im_i = columns(Mi), im_p = columns(Mp);
  auto fail = [&](const std::string& s) {
    rep.exact = false;
    rep.failures.push_back(s);
  };

  // coker(phi_i) -> Q(u_i) is well defined: included pairing columns lie in im(M_i).
  Submodule Qi_rel(R, di, im_i, rel);
  for (size_t k = 0; k < phi.domain_size(); ++k) {
    std::vector<Polynomial> v(di, Polynomial(R));
    for (size_t mu = 0; mu < phi.target_rank(); ++mu) v[dp + mu] = phi.pairing[mu][k];
    if (di > 0 && !Qi_rel.contains(v)) fail("image of K generator " + std::to_string(k) + " not in im(phi_{u_i})");
  }
  // Q(u_i) -> Q(u_{i-1}) is well defined: projected columns lie in im(M_{i-1}).
  Submodule Qp_rel(R, dp, im_p, rel);
  for (size_t g = 0; g < n; ++g) {
    std::vector<Polynomial> v(im_i[g].begin(), im_i[g].begin() + static_cast<long>(dp));
    if (dp > 0 && !Qp_rel.contains(v)) fail("projection of column " + std::to_string(g) + " not in im(phi_{u_{i-1}})");
  }
  // Surjectivity onto Q(u_{i-1}): every basis vector is hit modulo im(M_{i-1}).
  if (dp > 0) {
    std::vector<std::vector<Polynomial>> hit;
    for (size_t k = 0; k < dp; ++k) hit.push_back(unit_vec(dp, k));
    for (const auto& c : im_p) hit.push_back(c);
    if (!Submodule(R, dp, hit, rel).is_everything()) fail("Q(u_i) -> Q(u_{i-1}) not surjective");
  }
  // Exactness in the middle: kernel of A^{d_i} -> Q(u_{i-1}), computed from
  // the syzygies of [proj | -M_{i-1}], equals im(level coordinates) + im(M_i).
  std::vector<std::vector<Polynomial>> ker;
  if (dp == 0) {
    for (size_t k = 0; k < di; ++k) ker.push_back(unit_vec(di, k));
  } else {
    FreeModuleMap F(R, dp, di + n);
    for (size_t r = 0; r < dp; ++r) {
      F.matrix[r][r] = Polynomial::constant(R, 1);
      for (size_t g = 0; g < n; ++g) F.matrix[r][di + g] = -Mp.entries[r][g];
    }
    for (const auto& s : syzygy_kernel(F, rel)) ker.emplace_back(s.begin(), s.begin() + static_cast<long>(di));
  }
  std::vector<std::vector<Polynomial>> img = im_i;
  for (size_t mu = 0; mu < phi.target_rank(); ++mu) img.push_back(unit_vec(di, dp + mu));
  if (di > 0) {
    Submodule image(R, di, img, rel);
    for (size_t k = 0; k < ker.size(); ++k)
      if (!image.contains(ker[k])) fail("kernel generator " + std::to_string(k) + " not in the image");
    std::vector<std::vector<Polynomial>> kk = ker;
    for (const auto& c : im_i) kk.push_back(c);
    Submodule kernel(R, di, kk, rel);
    for (size_t mu = 0; mu < phi.target_rank(); ++mu)
      if (!kernel.contains(unit_vec(di, dp + mu))) fail("level coordinate " + std::to_string(mu) + " not in the kernel");
  }
  return rep;
}

}  // namespace nrgit
