#pragma once

#include <string>
#include <vector>

#include "nrgit/algebra.hpp"
#include "nrgit/lie.hpp"

namespace nrgit {

// Leibniz extension of generator images to a polynomial, reduced in A.
inline Polynomial apply_derivation_table(const PresentedAlgebra& A, const std::vector<Polynomial>& images,
                                         const Polynomial& p) {
  Polynomial out(A.ring());
  for (size_t i = 0; i < images.size(); ++i) {
    if (images[i].is_zero()) continue;
    Polynomial d = p.partial(i);
    if (!d.is_zero()) out += d * images[i];
  }
  return A.reduce(out);
}

// A graded Lie algebra acting on a presented algebra by derivations.
// table[j][g] is the image of generator g under basis vector j.
class DerivationAction {
 public:
  DerivationAction() = default;
  DerivationAction(PresentedAlgebra A, GradedLieAlgebra lie, std::vector<std::vector<Polynomial>> table)
      : A_(std::move(A)), lie_(std::move(lie)), table_(std::move(table)) {
    if (table_.size() != lie_.dim()) throw std::invalid_argument("action table size mismatch");
    for (auto& row : table_) {
      if (row.size() != A_.ngens()) throw std::invalid_argument("action table row size mismatch");
      for (auto& p : row) p = A_.reduce(p);
    }
  }

  const PresentedAlgebra& algebra() const { return A_; }
  const GradedLieAlgebra& lie() const { return lie_; }
  const RingPtr& ring() const { return A_.ring(); }
  const std::vector<std::vector<Polynomial>>& table() const { return table_; }
  const Polynomial& image(size_t j, size_t g) const { return table_[j][g]; }

  Polynomial apply(size_t j, const Polynomial& p) const { return apply_derivation_table(A_, table_[j], p); }

  std::vector<Polynomial> images_of(const LieElement& xi) const {
    std::vector<Polynomial> im(A_.ngens(), Polynomial(A_.ring()));
    for (size_t j = 0; j < lie_.dim(); ++j) {
      if (xi[j] == 0) continue;
      for (size_t g = 0; g < A_.ngens(); ++g) im[g] += table_[j][g] * xi[j];
    }
    return im;
  }
  Polynomial apply(const LieElement& xi, const Polynomial& p) const {
    return apply_derivation_table(A_, images_of(xi), p);
  }

  int pbw_weight(const Exponents& p) const {
    int w = 0;
    for (size_t j = 0; j < p.size(); ++j) w += p[j] * lie_.weight_of(j);
    return w;
  }

  // xi^p . f with the rightmost PBW factor acting first.
  Polynomial apply_pbw(const Exponents& p, const Polynomial& f) const {
    Polynomial cur = A_.reduce(f);
    if (cur.is_zero()) return cur;
    if (pbw_weight(p) + cur.min_weight() > 0) return Polynomial(A_.ring());
    for (size_t j = p.size(); j-- > 0;)
      for (int k = 0; k < p[j]; ++k) {
        cur = apply(j, cur);
        if (cur.is_zero()) return cur;
      }
    return cur;
  }

  // Every violated invariant, each with a witness; empty iff valid.
  std::vector<Violation> validate() const {
    std::vector<Violation> out = lie_.validate();
    const auto& R = *A_.ring();
    for (size_t g = 0; g < R.nvars(); ++g)
      if (R.weight(g) > 0)
        out.push_back({"positive ring weight", R.name(g) + " has weight " + std::to_string(R.weight(g))});
    if (!A_.relations_homogeneous()) out.push_back({"inhomogeneous relations", "relations ideal is not graded"});
    for (size_t j = 0; j < lie_.dim(); ++j)
      for (size_t g = 0; g < R.nvars(); ++g) {
        const Polynomial& im = table_[j][g];
        if (im.is_zero()) continue;
        int expected = R.weight(g) + lie_.weight_of(j);
        if (!im.is_homogeneous() || im.min_weight() != expected)
          out.push_back({"weight", lie_.name(j) + " . " + R.name(g) + " = " + im.to_string() + " has weight " +
                                       (im.is_homogeneous() ? std::to_string(im.min_weight()) : std::string("mixed")) +
                                       ", expected " + std::to_string(expected)});
      }
    for (size_t j = 0; j < lie_.dim(); ++j)
      for (const auto& r : A_.relations().generators()) {
        Polynomial d = apply(j, r);
        if (!d.is_zero())
          out.push_back({"relation not preserved", lie_.name(j) + " . (" + r.to_string() + ") = " + d.to_string()});
      }
    for (size_t a = 0; a < lie_.dim(); ++a)
      for (size_t b = a + 1; b < lie_.dim(); ++b) {
        std::vector<Polynomial> br = images_of(lie_.bracket(a, b));
        for (size_t g = 0; g < R.nvars(); ++g) {
          Polynomial lhs = apply(a, table_[b][g]) - apply(b, table_[a][g]);
          if (!A_.equal(lhs, br[g])) {
            out.push_back({"bracket compatibility", "[" + lie_.name(a) + ", " + lie_.name(b) + "] on " + R.name(g) +
                                                        ": commutator gives " + A_.reduce(lhs).to_string() +
                                                        ", bracket gives " + br[g].to_string()});
          }
        }
      }
    return out;
  }

 private:
  PresentedAlgebra A_;
  GradedLieAlgebra lie_;
  std::vector<std::vector<Polynomial>> table_;
};

}  // namespace nrgit
