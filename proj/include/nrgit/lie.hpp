#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrgit/rational.hpp"

namespace nrgit {

// Coordinates in the Lie algebra basis.
using LieElement = std::vector<Rational>;

struct Violation {
  std::string kind;
  std::string witness;
};

// Positively graded nilpotent Lie algebra. Levels are stored with strictly
// decreasing weights; the basis is level 1 first, each level in user order.
class GradedLieAlgebra {
 public:
  struct Level {
    int weight = 0;
    std::vector<std::string> names;
  };

  GradedLieAlgebra() = default;
  explicit GradedLieAlgebra(std::vector<Level> levels) : levels_(std::move(levels)) {
    std::stable_sort(levels_.begin(), levels_.end(), [](const Level& a, const Level& b) { return a.weight > b.weight; });
    for (size_t i = 0; i < levels_.size(); ++i) {
      if (levels_[i].weight <= 0) throw std::invalid_argument("Lie weights must be positive");
      if (i > 0 && levels_[i].weight == levels_[i - 1].weight) throw std::invalid_argument("repeated Lie weight");
      for (const auto& n : levels_[i].names) {
        if (index_of(n)) throw std::invalid_argument("duplicate Lie basis name: " + n);
        names_.push_back(n);
        level_of_.push_back(i);
      }
    }
    br_.assign(dim(), std::vector<LieElement>(dim(), zero()));
    explicit_.assign(dim(), std::vector<char>(dim(), 0));
  }

  size_t dim() const { return names_.size(); }
  size_t nlevels() const { return levels_.size(); }
  const std::vector<Level>& levels() const { return levels_; }
  int level_weight(size_t level) const { return levels_[level].weight; }
  size_t level_of(size_t j) const { return level_of_[j]; }
  int weight_of(size_t j) const { return levels_[level_of_[j]].weight; }
  const std::string& name(size_t j) const { return names_[j]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<size_t> index_of(const std::string& n) const {
    for (size_t j = 0; j < names_.size(); ++j)
      if (names_[j] == n) return j;
    return std::nullopt;
  }
  // Basis indices of a level.
  std::vector<size_t> level_basis(size_t level) const {
    std::vector<size_t> out;
    for (size_t j = 0; j < dim(); ++j)
      if (level_of_[j] == level) out.push_back(j);
    return out;
  }
  size_t level_dim(size_t level) const { return levels_[level].names.size(); }

  LieElement zero() const { return LieElement(dim(), 0); }
  LieElement basis_vector(size_t j) const {
    LieElement v = zero();
    v[j] = 1;
    return v;
  }

  // Sets [a,b] = v; [b,a] = -v unless [b,a] was set explicitly.
  void set_bracket(size_t a, size_t b, const LieElement& v) {
    br_[a][b] = v;
    explicit_[a][b] = 1;
    if (!explicit_[b][a]) {
      LieElement m = v;
      for (auto& c : m) c = -c;
      br_[b][a] = m;
    }
  }
  bool bracket_explicit(size_t a, size_t b) const { return explicit_[a][b] != 0; }

  const LieElement& bracket(size_t a, size_t b) const { return br_[a][b]; }
  LieElement bracket(const LieElement& x, const LieElement& y) const {
    LieElement out = zero();
    for (size_t a = 0; a < dim(); ++a) {
      if (x[a] == 0) continue;
      for (size_t b = 0; b < dim(); ++b) {
        if (y[b] == 0) continue;
        Rational c = x[a] * y[b];
        for (size_t k = 0; k < dim(); ++k)
          if (br_[a][b][k] != 0) out[k] += c * br_[a][b][k];
      }
    }
    return out;
  }
  bool is_abelian() const {
    for (const auto& row : br_)
      for (const auto& v : row)
        for (const auto& c : v)
          if (c != 0) return false;
    return true;
  }

  // Weight of a homogeneous element; nullopt when zero or mixed.
  std::optional<int> weight(const LieElement& x) const {
    std::optional<int> w;
    for (size_t j = 0; j < dim(); ++j) {
      if (x[j] == 0) continue;
      if (w && *w != weight_of(j)) return std::nullopt;
      w = weight_of(j);
    }
    return w;
  }

  std::string format(const LieElement& x) const {
    std::string s;
    for (size_t j = 0; j < dim(); ++j) {
      if (x[j] == 0) continue;
      Rational c = x[j];
      if (!s.empty()) s += c < 0 ? " - " : " + ";
      else if (c < 0) s += "-";
      Rational a = abs(c);
      if (a != 1) s += a.get_str() + "*";
      s += names_[j];
    }
    return s.empty() ? "0" : s;
  }

  std::vector<Violation> validate() const {
    std::vector<Violation> out;
    for (size_t a = 0; a < dim(); ++a)
      for (size_t b = a; b < dim(); ++b) {
        LieElement sum = br_[a][b];
        for (size_t k = 0; k < dim(); ++k) sum[k] += br_[b][a][k];
        if (sum != zero())
          out.push_back({"antisymmetry", "[" + names_[a] + ", " + names_[b] + "] + [" + names_[b] + ", " + names_[a] +
                                             "] = " + format(sum)});
      }
    for (size_t a = 0; a < dim(); ++a)
      for (size_t b = 0; b < dim(); ++b) {
        const LieElement& v = br_[a][b];
        if (v == zero()) continue;
        int target = weight_of(a) + weight_of(b);
        for (size_t k = 0; k < dim(); ++k)
          if (v[k] != 0 && weight_of(k) != target) {
            out.push_back({"weight additivity", "[" + names_[a] + ", " + names_[b] + "] has component " + names_[k] +
                                                    " of weight " + std::to_string(weight_of(k)) + ", expected " +
                                                    std::to_string(target)});
            break;
          }
      }
    for (size_t a = 0; a < dim(); ++a)
      for (size_t b = a + 1; b < dim(); ++b)
        for (size_t c = b + 1; c < dim(); ++c) {
          LieElement xa = basis_vector(a), xb = basis_vector(b), xc = basis_vector(c);
          LieElement j1 = bracket(xa, bracket(xb, xc));
          LieElement j2 = bracket(xb, bracket(xc, xa));
          LieElement j3 = bracket(xc, bracket(xa, xb));
          for (size_t k = 0; k < dim(); ++k) j1[k] += j2[k] + j3[k];
          if (j1 != zero())
            out.push_back({"jacobi", names_[a] + ", " + names_[b] + ", " + names_[c] + " gives " + format(j1)});
        }
    return out;
  }

  // u / u_i: drop the first `drop` levels and bracket components in them.
  GradedLieAlgebra drop_top_levels(size_t drop) const {
    std::vector<Level> lv(levels_.begin() + static_cast<long>(std::min(drop, levels_.size())), levels_.end());
    GradedLieAlgebra q(lv);
    size_t off = dim() - q.dim();
    for (size_t a = 0; a < q.dim(); ++a)
      for (size_t b = 0; b < q.dim(); ++b) {
        LieElement v(q.dim(), 0);
        for (size_t k = 0; k < q.dim(); ++k) v[k] = br_[a + off][b + off][k + off];
        q.br_[a][b] = v;
        q.explicit_[a][b] = 1;
      }
    return q;
  }

  // Change of basis: new basis vector j is sum_k change[j][k] * old_k. The
  // change must be block diagonal over levels and invertible.
  GradedLieAlgebra change_basis(const std::vector<LieElement>& change, const std::vector<LieElement>& inverse) const {
    GradedLieAlgebra q(levels_);
    for (size_t a = 0; a < dim(); ++a)
      for (size_t b = 0; b < dim(); ++b) {
        LieElement old = bracket(change[a], change[b]);
        LieElement v(dim(), 0);
        for (size_t k = 0; k < dim(); ++k) {
          if (old[k] == 0) continue;
          for (size_t j = 0; j < dim(); ++j) v[j] += old[k] * inverse[k][j];
        }
        q.br_[a][b] = v;
        q.explicit_[a][b] = 1;
      }
    return q;
  }

 private:
  std::vector<Level> levels_;
  std::vector<std::string> names_;
  std::vector<size_t> level_of_;
  std::vector<std::vector<LieElement>> br_;
  std::vector<std::vector<char>> explicit_;
};

}  // namespace nrgit
