#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "nrgit/action.hpp"

namespace nrgit {

// PBW exponent vector over the Lie basis (level 1 first).
using PBW = Exponents;
using UEAElement = std::map<PBW, Rational>;

inline int pbw_degree(const PBW& p) { return total_degree(p); }

inline std::vector<size_t> pbw_word(const PBW& p) {
  std::vector<size_t> w;
  for (size_t j = 0; j < p.size(); ++j)
    for (int k = 0; k < p[j]; ++k) w.push_back(j);
  return w;
}

inline Integer pbw_factorial(const PBW& p) {
  Integer f = 1;
  for (int k : p) f *= factorial(k);
  return f;
}

// PBW normal form in U(u) by rewriting out-of-order pairs
// x_b x_a -> x_a x_b + [x_b, x_a] for b > a, memoised per word.
class UniversalEnveloping {
 public:
  explicit UniversalEnveloping(GradedLieAlgebra lie) : lie_(std::move(lie)) {}

  const GradedLieAlgebra& lie() const { return lie_; }

  int weight(const PBW& p) const {
    int w = 0;
    for (size_t j = 0; j < p.size(); ++j) w += p[j] * lie_.weight_of(j);
    return w;
  }

  UEAElement normalize_word(const std::vector<size_t>& word) const {
    auto it = memo_.find(word);
    if (it != memo_.end()) return it->second;
    UEAElement out;
    size_t k = 0;
    while (k + 1 < word.size() && word[k] <= word[k + 1]) ++k;
    if (k + 1 >= word.size()) {
      PBW p(lie_.dim(), 0);
      for (size_t j : word) p[j] += 1;
      out[p] = 1;
    } else {
      std::vector<size_t> swapped = word;
      std::swap(swapped[k], swapped[k + 1]);
      add_into(out, normalize_word(swapped), 1);
      const LieElement& br = lie_.bracket(word[k], word[k + 1]);
      for (size_t c = 0; c < lie_.dim(); ++c) {
        if (br[c] == 0) continue;
        std::vector<size_t> shorter(word.begin(), word.begin() + static_cast<long>(k));
        shorter.push_back(c);
        shorter.insert(shorter.end(), word.begin() + static_cast<long>(k) + 2, word.end());
        add_into(out, normalize_word(shorter), br[c]);
      }
    }
    memo_.emplace(word, out);
    return out;
  }

  UEAElement multiply(const PBW& a, const PBW& b) const {
    std::vector<size_t> w = pbw_word(a);
    auto wb = pbw_word(b);
    w.insert(w.end(), wb.begin(), wb.end());
    return normalize_word(w);
  }

  UEAElement multiply(const UEAElement& a, const UEAElement& b) const {
    UEAElement out;
    for (const auto& [p, c] : a)
      for (const auto& [q, d] : b) add_into(out, multiply(p, q), c * d);
    return out;
  }

  // PBW monomials of weight exactly w, in lexicographic exponent order.
  std::vector<PBW> monomials_of_weight(int w) const {
    std::vector<PBW> out;
    PBW p(lie_.dim(), 0);
    std::function<void(size_t, int)> rec = [&](size_t j, int left) {
      if (j == lie_.dim()) {
        if (left == 0) out.push_back(p);
        return;
      }
      int wj = lie_.weight_of(j);
      for (int k = 0; k * wj <= left; ++k) {
        p[j] = k;
        rec(j + 1, left - k * wj);
      }
      p[j] = 0;
    };
    if (w >= 0) rec(0, w);
    return out;
  }

  std::vector<PBW> monomials_up_to_weight(int w) const {
    std::vector<PBW> out;
    for (int v = 0; v <= w; ++v) {
      auto m = monomials_of_weight(v);
      out.insert(out.end(), m.begin(), m.end());
    }
    return out;
  }

  static void add_into(UEAElement& acc, const UEAElement& x, const Rational& c) {
    for (const auto& [p, v] : x) {
      Rational& t = acc[p];
      t += c * v;
      if (t == 0) acc.erase(p);
    }
  }

 private:
  GradedLieAlgebra lie_;
  mutable std::map<std::vector<size_t>, UEAElement> memo_;
};

// ad_{a_1} ... ad_{a_{m-1}} (a_m); the empty word maps to 0.
inline LieElement complete_bracket(const GradedLieAlgebra& lie, const std::vector<size_t>& word) {
  if (word.empty()) return lie.zero();
  LieElement acc = lie.basis_vector(word.back());
  for (size_t k = word.size() - 1; k-- > 0;) acc = lie.bracket(lie.basis_vector(word[k]), acc);
  return acc;
}

inline LieElement complete_bracket(const GradedLieAlgebra& lie, const PBW& p) {
  return complete_bracket(lie, pbw_word(p));
}

inline Polynomial apply_uea(const DerivationAction& act, const UEAElement& x, const Polynomial& f) {
  Polynomial out(act.ring());
  for (const auto& [p, c] : x) out += act.apply_pbw(p, f) * c;
  return out;
}

struct CoactionTerm {
  PBW alpha;
  Polynomial coefficient;  // f_alpha = xi^alpha . f / alpha!
};

// f -> sum_alpha u^alpha (x) f_alpha for g(u) = exp(u_1 xi_1) ... exp(u_r xi_r).
inline std::vector<CoactionTerm> coaction_expand(const DerivationAction& act, const Polynomial& f) {
  std::vector<CoactionTerm> out;
  Polynomial g = act.algebra().reduce(f);
  if (g.is_zero()) return out;
  UniversalEnveloping U(act.lie());
  for (const auto& p : U.monomials_up_to_weight(-g.min_weight())) {
    Polynomial v = act.apply_pbw(p, g);
    if (v.is_zero()) continue;
    out.push_back({p, v * (Rational(1) / Rational(pbw_factorial(p)))});
  }
  return out;
}

inline std::string format_pbw(const GradedLieAlgebra& lie, const PBW& p) {
  std::string s;
  for (size_t j = 0; j < p.size(); ++j) {
    if (p[j] == 0) continue;
    if (!s.empty()) s += "*";
    s += lie.name(j);
    if (p[j] > 1) s += "^" + std::to_string(p[j]);
  }
  return s.empty() ? "1" : s;
}

// Group law m(u, v) in exponential coordinates of the second kind:
// g(u) g(v) = g(m(u, v)). Variables u1..ur, v1..vr.
inline std::vector<Polynomial> group_law(const GradedLieAlgebra& lie) {
  const size_t r = lie.dim();
  std::vector<std::string> names;
  for (size_t j = 0; j < r; ++j) names.push_back("u" + std::to_string(j + 1));
  for (size_t j = 0; j < r; ++j) names.push_back("v" + std::to_string(j + 1));
  RingPtr R = GradedRing::make(names, std::vector<int>(2 * r, 0));
  UniversalEnveloping U(lie);
  std::vector<Polynomial> m(r, Polynomial(R));
  for (size_t j = 0; j < r; ++j) {
    int wj = lie.weight_of(j);
    PBW ej(r, 0);
    ej[j] = 1;
    for (int a = 0; a <= wj; ++a)
      for (const auto& p : U.monomials_of_weight(a))
        for (const auto& q : U.monomials_of_weight(wj - a)) {
          UEAElement prod = U.multiply(p, q);
          auto it = prod.find(ej);
          if (it == prod.end()) continue;
          Exponents e(2 * r, 0);
          for (size_t k = 0; k < r; ++k) {
            e[k] = p[k];
            e[r + k] = q[k];
          }
          Rational c = it->second / Rational(pbw_factorial(p) * pbw_factorial(q));
          m[j] += Polynomial::monomial(R, e, c);
        }
  }
  return m;
}

// c^alpha_{beta,gamma}: coefficient of u^beta v^gamma in m(u,v)^alpha.
struct CoefficientTable {
  size_t rank = 0;
  int bound = 0;
  std::map<std::tuple<PBW, PBW, PBW>, Rational> values;  // nonzero entries only

  Rational get(const PBW& a, const PBW& b, const PBW& c) const {
    auto it = values.find({a, b, c});
    return it == values.end() ? Rational(0) : it->second;
  }
};

inline std::vector<PBW> multi_indices_up_to(size_t r, int d) {
  std::vector<PBW> out;
  PBW p(r, 0);
  std::function<void(size_t, int)> rec = [&](size_t j, int left) {
    if (j == r) {
      out.push_back(p);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      p[j] = k;
      rec(j + 1, left - k);
    }
    p[j] = 0;
  };
  rec(0, d);
  std::stable_sort(out.begin(), out.end(), [](const PBW& a, const PBW& b) { return total_degree(a) < total_degree(b); });
  return out;
}

inline CoefficientTable comult_coefficients(const GradedLieAlgebra& lie, int D) {
  CoefficientTable t;
  t.rank = lie.dim();
  t.bound = D;
  const size_t r = lie.dim();
  auto m = group_law(lie);
  RingPtr R = m.empty() ? GradedRing::make({}, {}) : m[0].ring();
  std::map<PBW, Polynomial> powers;
  for (const auto& a : multi_indices_up_to(r, D)) {
    Polynomial pa = Polynomial::constant(R, 1);
    // Build from a smaller power to avoid recomputation.
    size_t j = 0;
    while (j < r && a[j] == 0) ++j;
    if (j < r) {
      PBW prev = a;
      prev[j] -= 1;
      pa = powers.at(prev) * m[j];
    }
    powers.emplace(a, pa);
    for (const auto& [e, c] : pa.terms()) {
      PBW b(e.begin(), e.begin() + static_cast<long>(r)), g(e.begin() + static_cast<long>(r), e.end());
      if (total_degree(b) > D || total_degree(g) > D) continue;
      t.values[{a, b, g}] = c;
    }
  }
  return t;
}

struct LemmaReport {
  bool ok = true;
  size_t checks = 0;
  std::vector<std::string> failures;
  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond) {
      ok = false;
      if (failures.size() < 20) failures.push_back(what);
    }
  }
};

inline std::string format_multi(const PBW& p) {
  std::string s = "(";
  for (size_t j = 0; j < p.size(); ++j) s += (j ? "," : "") + std::to_string(p[j]);
  return s + ")";
}

// Counit, degree bound, the gamma = e_j trichotomy and multiplicativity.
inline LemmaReport verify_comult_lemmas(const CoefficientTable& t) {
  LemmaReport rep;
  const size_t r = t.rank;
  const int D = t.bound;
  auto idx = multi_indices_up_to(r, D);
  PBW zero(r, 0);
  for (const auto& a : idx)
    for (const auto& g : idx) {
      Rational d = a == g ? 1 : 0;
      rep.expect(t.get(a, zero, g) == d, "counit c^" + format_multi(a) + "_{0," + format_multi(g) + "}");
      rep.expect(t.get(a, g, zero) == d, "counit c^" + format_multi(a) + "_{" + format_multi(g) + ",0}");
    }
  for (const auto& [key, v] : t.values) {
    const auto& [a, b, g] = key;
    rep.expect(total_degree(a) <= total_degree(b) + total_degree(g),
               "degree bound fails at c^" + format_multi(a) + "_{" + format_multi(b) + "," + format_multi(g) + "}");
  }
  for (const auto& a : idx)
    for (const auto& b : idx) {
      if (total_degree(a) != total_degree(b) + 1) continue;
      for (size_t j = 0; j < r; ++j) {
        PBW ej(r, 0);
        ej[j] = 1;
        Rational v = t.get(a, b, ej);
        bool c1 = v == Rational(1 + b[j]);
        bool c2 = v != 0;
        bool c3 = a == exp_add(b, ej);
        rep.expect(c1 == c2 && c2 == c3, "trichotomy fails at alpha=" + format_multi(a) + " beta=" + format_multi(b) +
                                             " j=" + std::to_string(j + 1));
      }
    }
  for (const auto& a : idx) {
    size_t i = 0;
    while (i < r && a[i] == 0) ++i;
    if (i == r) continue;
    PBW a2 = a;
    a2[i] -= 1;
    PBW a1(r, 0);
    a1[i] = 1;
    for (const auto& b : idx)
      for (const auto& g : idx) {
        Rational s = 0;
        for (const auto& b1 : idx) {
          if (!divides(b1, b)) continue;
          for (const auto& g1 : idx) {
            if (!divides(g1, g)) continue;
            Rational x = t.get(a1, b1, g1);
            if (x == 0) continue;
            s += x * t.get(a2, exp_sub(b, b1), exp_sub(g, g1));
          }
        }
        rep.expect(s == t.get(a, b, g), "multiplicativity fails at alpha=" + format_multi(a) + " beta=" +
                                            format_multi(b) + " gamma=" + format_multi(g));
      }
  }
  return rep;
}

}  // namespace nrgit
