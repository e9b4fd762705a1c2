#pragma once

#include <map>
#include <string>
#include <vector>

#include "nrgit/rational.hpp"

namespace nrgit {

// Free associative algebra over Q on letters 0..n-1.
using Word = std::vector<size_t>;
using FreeElement = std::map<Word, Rational>;

inline void free_add(FreeElement& acc, const FreeElement& x, const Rational& c = 1) {
  for (const auto& [w, v] : x) {
    Rational& t = acc[w];
    t += c * v;
    if (t == 0) acc.erase(w);
  }
}

inline FreeElement free_word(const Word& w) { return {{w, Rational(1)}}; }

inline FreeElement free_mul(const FreeElement& a, const FreeElement& b) {
  FreeElement out;
  for (const auto& [u, c] : a)
    for (const auto& [v, d] : b) {
      Word w = u;
      w.insert(w.end(), v.begin(), v.end());
      free_add(out, free_word(w), c * d);
    }
  return out;
}

inline FreeElement free_commutator(const FreeElement& a, const FreeElement& b) {
  FreeElement out = free_mul(a, b);
  free_add(out, free_mul(b, a), -1);
  return out;
}

// Right-nested bracket [a_1, [a_2, ... [a_{m-1}, a_m]]]; the empty word gives 0.
inline FreeElement free_complete_bracket(const Word& w) {
  if (w.empty()) return {};
  FreeElement acc = free_word({w.back()});
  for (size_t k = w.size() - 1; k-- > 0;) acc = free_commutator(free_word({w[k]}), acc);
  return acc;
}

inline Word ordered_word(const std::vector<int>& k) {
  Word w;
  for (size_t i = 0; i < k.size(); ++i)
    for (int t = 0; t < k[i]; ++t) w.push_back(i);
  return w;
}

struct IdentityCheck {
  FreeElement lhs, rhs;
  bool holds() const { return lhs == rhs; }
};

inline std::string format_free(const FreeElement& x, const std::vector<std::string>& letters) {
  std::string s;
  for (const auto& [w, c] : x) {
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    Rational a = abs(c);
    std::string word;
    for (size_t l : w) word += (word.empty() ? "" : "*") + letters[l];
    if (word.empty()) {
      s += a.get_str();
      continue;
    }
    if (a != 1) s += a.get_str() + "*";
    s += word;
  }
  return s.empty() ? "0" : s;
}

// (sum_i k_i w_i) y^k against sum_{0 < s <= k} C(k,s) w_{max i: s_i > 0} [y^s]] y^{k-s},
// where y^k is the ordered word y_1^{k_1} ... y_n^{k_n}.
inline IdentityCheck check_weighted_bracket_identity(const std::vector<int>& weights, const std::vector<int>& k) {
  IdentityCheck out;
  Rational total = 0;
  for (size_t i = 0; i < k.size(); ++i) total += k[i] * weights[i];
  free_add(out.lhs, free_word(ordered_word(k)), total);
  std::vector<int> s(k.size(), 0);
  while (true) {
    size_t i = 0;
    while (i < k.size() && s[i] == k[i]) s[i++] = 0;
    if (i == k.size()) break;
    s[i] += 1;
    Integer coef = 1;
    size_t top = 0;
    std::vector<int> rest(k.size());
    for (size_t j = 0; j < k.size(); ++j) {
      coef *= binomial(k[j], s[j]);
      if (s[j] > 0) top = j;
      rest[j] = k[j] - s[j];
    }
    FreeElement term = free_mul(free_complete_bracket(ordered_word(s)), free_word(ordered_word(rest)));
    free_add(out.rhs, term, Rational(coef) * weights[top]);
  }
  return out;
}

// x^k y against sum_{s=0}^{k} C(k,s) [x^{k-s} y]] x^s with x = 0, y = 1.
inline IdentityCheck check_commutator_identity(int k) {
  IdentityCheck out;
  Word lhs(static_cast<size_t>(k), 0);
  lhs.push_back(1);
  free_add(out.lhs, free_word(lhs));
  for (int s = 0; s <= k; ++s) {
    Word inner(static_cast<size_t>(k - s), 0);
    inner.push_back(1);
    FreeElement term = free_mul(free_complete_bracket(inner), free_word(Word(static_cast<size_t>(s), 0)));
    free_add(out.rhs, term, Rational(binomial(k, s)));
  }
  return out;
}

}  // namespace nrgit
