#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nrgit/rational.hpp"
#include "nrgit/ring.hpp"

namespace nrgit {

// Sparse polynomial; terms are kept sorted by decreasing monomial order with
// no zero coefficients.
class Polynomial {
 public:
  using Term = std::pair<Exponents, Rational>;

  Polynomial() = default;
  explicit Polynomial(RingPtr r) : ring_(std::move(r)) {}

  static Polynomial constant(const RingPtr& r, const Rational& c) {
    Polynomial p(r);
    if (c != 0) p.terms_.emplace_back(Exponents(r->nvars(), 0), c);
    return p;
  }
  static Polynomial variable(const RingPtr& r, size_t i) {
    Exponents e(r->nvars(), 0);
    e[i] = 1;
    return monomial(r, std::move(e), 1);
  }
  static Polynomial monomial(const RingPtr& r, Exponents e, const Rational& c) {
    Polynomial p(r);
    if (c != 0) p.terms_.emplace_back(std::move(e), c);
    return p;
  }
  // Combines like terms and sorts.
  static Polynomial from_terms(const RingPtr& r, const std::vector<Term>& terms) {
    Cmp cmp{&r->order()};
    std::map<Exponents, Rational, Cmp> acc(cmp);
    for (const auto& [e, c] : terms) acc[e] += c;
    Polynomial p(r);
    for (auto& [e, c] : acc)
      if (c != 0) p.terms_.emplace_back(e, c);
    return p;
  }

  const RingPtr& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && nrgit::total_degree(terms_[0].first) == 0); }
  Rational constant_term() const {
    if (!terms_.empty() && nrgit::total_degree(terms_.back().first) == 0) return terms_.back().second;
    return 0;
  }
  const Exponents& lead_exp() const { return terms_.front().first; }
  const Rational& lead_coeff() const { return terms_.front().second; }

  int total_degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, nrgit::total_degree(t.first));
    return d;
  }

  int term_weight(const Exponents& e) const {
    int w = 0;
    for (size_t i = 0; i < e.size(); ++i) w += ring_->weight(i) * e[i];
    return w;
  }
  int min_weight() const {
    int m = 0;
    bool first = true;
    for (const auto& t : terms_) {
      int w = term_weight(t.first);
      if (first || w < m) m = w;
      first = false;
    }
    return m;
  }
  int max_weight() const {
    int m = 0;
    bool first = true;
    for (const auto& t : terms_) {
      int w = term_weight(t.first);
      if (first || w > m) m = w;
      first = false;
    }
    return m;
  }
  bool is_homogeneous() const { return is_zero() || min_weight() == max_weight(); }

  Polynomial operator-() const {
    Polynomial p = *this;
    for (auto& t : p.terms_) t.second = -t.second;
    return p;
  }
  Polynomial operator+(const Polynomial& o) const { return axpy(o, 1, nullptr); }
  Polynomial operator-(const Polynomial& o) const { return axpy(o, -1, nullptr); }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }

  Polynomial operator*(const Rational& c) const {
    if (c == 0) return Polynomial(ring_);
    Polynomial p = *this;
    for (auto& t : p.terms_) t.second *= c;
    return p;
  }
  friend Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

  Polynomial operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return Polynomial(ring_);
    if (o.size() == 1) return mul_term(o.terms_[0].first, o.terms_[0].second);
    if (size() == 1) return o.mul_term(terms_[0].first, terms_[0].second);
    Cmp cmp{&ring_->order()};
    std::map<Exponents, Rational, Cmp> acc(cmp);
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) acc[exp_add(a.first, b.first)] += a.second * b.second;
    Polynomial p(ring_);
    for (auto& [e, c] : acc)
      if (c != 0) p.terms_.emplace_back(e, c);
    return p;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  // Multiplication by a single term keeps the order, so no sort is needed.
  Polynomial mul_term(const Exponents& e, const Rational& c) const {
    Polynomial p(ring_);
    if (c == 0) return p;
    p.terms_.reserve(terms_.size());
    for (const auto& t : terms_) p.terms_.emplace_back(exp_add(t.first, e), t.second * c);
    return p;
  }

  Polynomial pow(unsigned n) const {
    Polynomial r = constant(ring_, 1), b = *this;
    while (n) {
      if (n & 1) r = r * b;
      n >>= 1;
      if (n) b = b * b;
    }
    return r;
  }

  // this + c * shift * o, by a linear merge.
  Polynomial axpy(const Polynomial& o, const Rational& c, const Exponents* shift) const {
    Polynomial r(ring_ ? ring_ : o.ring_);
    r.terms_ = merge(terms_, 0, o.terms_, c, shift, r.ring_->order());
    return r;
  }

  static std::vector<Term> merge(const std::vector<Term>& a, size_t a_start, const std::vector<Term>& b,
                                 const Rational& c, const Exponents* shift, const MonomialOrder& ord) {
    std::vector<Term> out;
    out.reserve(a.size() - a_start + b.size());
    size_t i = a_start, j = 0;
    Exponents eb;
    auto bexp = [&](size_t k) -> const Exponents& {
      if (!shift) return b[k].first;
      eb = exp_add(b[k].first, *shift);
      return eb;
    };
    while (i < a.size() && j < b.size()) {
      const Exponents& e = bexp(j);
      int s = ord.compare(a[i].first, e);
      if (s > 0) {
        out.push_back(a[i++]);
      } else if (s < 0) {
        out.emplace_back(e, b[j++].second * c);
      } else {
        Rational v = a[i].second + b[j].second * c;
        if (v != 0) out.emplace_back(a[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; j < b.size(); ++j) out.emplace_back(bexp(j), b[j].second * c);
    return out;
  }

  Polynomial monic() const {
    if (is_zero()) return *this;
    Rational inv = 1 / lead_coeff();
    return *this * inv;
  }

  Polynomial partial(size_t var) const {
    std::vector<Term> out;
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents f = e;
      f[var] -= 1;
      out.emplace_back(std::move(f), c * e[var]);
    }
    // Decrementing one exponent can reorder terms under weighted orders.
    return from_terms(ring_, out);
  }

  Rational evaluate(const std::vector<Rational>& point) const {
    Rational s = 0;
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) t *= point[i];
      s += t;
    }
    return s;
  }

  // Ring map: variable i is sent to images[i] (all in the target ring).
  Polynomial substitute(const RingPtr& target, const std::vector<Polynomial>& images) const {
    Polynomial r(target);
    std::vector<std::vector<Polynomial>> powers(images.size());
    auto power = [&](size_t i, int k) -> const Polynomial& {
      auto& v = powers[i];
      if (v.empty()) v.push_back(constant(target, 1));
      while (static_cast<int>(v.size()) <= k) v.push_back(v.back() * images[i]);
      return v[k];
    };
    for (const auto& [e, c] : terms_) {
      Polynomial t = constant(target, c);
      for (size_t i = 0; i < e.size() && !t.is_zero(); ++i)
        if (e[i] > 0) t = t * power(i, e[i]);
      r += t;
    }
    return r;
  }

  // Reinterpret in a ring with the same number of variables (e.g. another order).
  Polynomial in_ring(const RingPtr& target) const {
    if (target == ring_) return *this;
    return from_terms(target, terms_);
  }

  // Copy into a ring where variable i maps to variable index_map[i].
  Polynomial embed(const RingPtr& target, const std::vector<size_t>& index_map) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [e, c] : terms_) {
      Exponents f(target->nvars(), 0);
      for (size_t i = 0; i < e.size(); ++i) f[index_map[i]] += e[i];
      out.emplace_back(std::move(f), c);
    }
    return from_terms(target, out);
  }

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      Rational a = abs(c);
      bool neg = c < 0;
      if (first) {
        if (neg) os << "-";
      } else {
        os << (neg ? " - " : " + ");
      }
      first = false;
      bool unit_mono = nrgit::total_degree(e) == 0;
      if (a != 1 || unit_mono) {
        os << a.get_str();
        if (!unit_mono) os << "*";
      }
      bool firstv = true;
      for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!firstv) os << "*";
        firstv = false;
        os << ring_->name(i);
        if (e[i] > 1) os << "^" << e[i];
      }
    }
    return os.str();
  }

 private:
  struct Cmp {
    const MonomialOrder* ord;
    bool operator()(const Exponents& a, const Exponents& b) const { return ord->compare(a, b) > 0; }
  };

  RingPtr ring_;
  std::vector<Term> terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

// Map from lambda-weight to the homogeneous component of that weight.
inline std::map<int, Polynomial> weight_decompose(const Polynomial& p) {
  std::map<int, std::vector<Polynomial::Term>> parts;
  for (const auto& t : p.terms()) parts[p.term_weight(t.first)].push_back(t);
  std::map<int, Polynomial> out;
  for (auto& [w, ts] : parts) out.emplace(w, Polynomial::from_terms(p.ring(), ts));
  return out;
}

}  // namespace nrgit
