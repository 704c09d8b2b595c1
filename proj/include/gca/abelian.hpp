#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gca/common.hpp"
#include "gca/intmat.hpp"

namespace gca {

/// Finitely generated abelian group Z^gens / column span of `relations`,
/// carrying its Smith-normal-form certificate. Canonical coordinates are
/// y = U x with unit diagonal entries dropped; torsion coordinates come
/// first (invariant factor > 1, divisibility chain), free coordinates last.
class FGAbelianGroup {
 public:
  FGAbelianGroup() : FGAbelianGroup(0, IntMatrix(0, 0)) {}

  FGAbelianGroup(int gens, IntMatrix relations)
      : gens_(gens), relations_(std::move(relations)) {
    check_internal(relations_.rows() == gens_,
                   "relation matrix rows must match generator count");
    snf_ = smith_normal_form(relations_);
    for (int i = 0; i < gens_; ++i) {
      Int d = snf_.diag(i);
      if (d == 1) continue;
      coord_rows_.push_back(i);
      invariants_.push_back(d);
    }
    // verify the certificate: U*R*V reproduces the diagonal
    check_internal(snf_.u * relations_ * snf_.v == snf_.d,
                   "SNF certificate must reproduce the diagonal");
    for (const Int& d : invariants_)
      if (d != 0) ++torsion_count_;
    // divisibility chain among torsion invariants
    for (int i = 0; i + 1 < torsion_count_; ++i)
      check_internal(invariants_[i + 1] % invariants_[i] == 0,
                     "invariant factors must form a divisibility chain");
  }

  static FGAbelianGroup free_group(int rank) {
    return FGAbelianGroup(rank, IntMatrix(rank, 0));
  }
  static FGAbelianGroup trivial() { return free_group(0); }

  int generator_count() const { return gens_; }
  const IntMatrix& relations() const { return relations_; }
  const SmithForm& snf() const { return snf_; }

  int coord_count() const { return int(invariants_.size()); }
  int torsion_count() const { return torsion_count_; }
  int free_rank() const { return coord_count() - torsion_count_; }

  std::vector<Int> torsion() const {
    return std::vector<Int>(invariants_.begin(),
                            invariants_.begin() + torsion_count_);
  }

  bool is_trivial() const { return coord_count() == 0; }

  Int order() const {  // 0 means infinite
    if (free_rank() > 0) return 0;
    Int n = 1;
    for (int i = 0; i < torsion_count_; ++i) n *= invariants_[i];
    return n;
  }

  /// Canonical coordinates of a generator-coordinate vector.
  std::vector<Int> canonical_coords(const std::vector<Int>& x) const {
    check_internal(int(x.size()) == gens_, "coordinate length mismatch");
    std::vector<Int> out(coord_count());
    for (int k = 0; k < coord_count(); ++k) {
      int row = coord_rows_[k];
      Int y = 0;
      for (int j = 0; j < gens_; ++j)
        if (snf_.u(row, j) != 0) y += snf_.u(row, j) * x[j];
      if (k < torsion_count_) {
        y %= invariants_[k];
        if (y < 0) y += invariants_[k];
      }
      out[k] = y;
    }
    return out;
  }

  bool is_zero(const std::vector<Int>& x) const {
    for (const Int& c : canonical_coords(x))
      if (c != 0) return false;
    return true;
  }

  bool equal(const std::vector<Int>& x, const std::vector<Int>& y) const {
    return canonical_coords(x) == canonical_coords(y);
  }

  /// Row of U giving the k-th free canonical coordinate as a functional
  /// on generator coordinates.
  std::vector<Int> free_functional(int k) const {
    check_internal(k >= 0 && k < free_rank(), "free functional out of range");
    int row = coord_rows_[torsion_count_ + k];
    std::vector<Int> out(gens_);
    for (int j = 0; j < gens_; ++j) out[j] = snf_.u(row, j);
    return out;
  }

  /// Same rank and torsion chain (the isomorphism class).
  bool isomorphic_to(const FGAbelianGroup& o) const {
    return free_rank() == o.free_rank() && torsion() == o.torsion();
  }

  std::string structure_string() const {
    std::string s;
    for (int i = 0; i < torsion_count_; ++i) {
      if (!s.empty()) s += " + ";
      s += "Z/" + invariants_[i].str();
    }
    if (free_rank() > 0) {
      if (!s.empty()) s += " + ";
      s += "Z";
      if (free_rank() > 1) s += "^" + std::to_string(free_rank());
    }
    return s.empty() ? "0" : s;
  }

 private:
  int gens_ = 0;
  IntMatrix relations_;
  SmithForm snf_;
  std::vector<int> coord_rows_;
  std::vector<Int> invariants_;  // torsion entries (>1), then 0s (free)
  int torsion_count_ = 0;
};

/// Homomorphism between f.g. abelian groups, as an integer matrix on the
/// chosen generators (column j = image of domain generator j).
struct GroupHom {
  FGAbelianGroup domain;
  FGAbelianGroup codomain;
  IntMatrix matrix;

  GroupHom() = default;
  GroupHom(FGAbelianGroup dom, FGAbelianGroup cod, IntMatrix m)
      : domain(std::move(dom)), codomain(std::move(cod)), matrix(std::move(m)) {
    check_internal(matrix.rows() == codomain.generator_count() &&
                       matrix.cols() == domain.generator_count(),
                   "hom matrix shape mismatch");
  }

  static GroupHom identity(const FGAbelianGroup& g) {
    return GroupHom(g, g, IntMatrix::identity(g.generator_count()));
  }

  static GroupHom zero(const FGAbelianGroup& dom, const FGAbelianGroup& cod) {
    return GroupHom(dom, cod,
                    IntMatrix(cod.generator_count(), dom.generator_count()));
  }

  std::vector<Int> apply(const std::vector<Int>& x) const {
    return matrix.apply(x);
  }

  /// Well-definedness certificate: X with M * R_dom = R_cod * X.
  std::optional<IntMatrix> well_defined_certificate() const {
    IntMatrix mr = matrix * domain.relations();
    IntMatrix x(codomain.relations().cols(), mr.cols());
    for (int j = 0; j < mr.cols(); ++j) {
      auto sol = solve_integer(codomain.relations(), mr.column_vec(j));
      if (!sol) return std::nullopt;
      for (int i = 0; i < x.rows(); ++i) x(i, j) = (*sol)[i];
    }
    return x;
  }

  bool is_well_defined() const { return well_defined_certificate().has_value(); }

  GroupHom compose_after(const GroupHom& inner) const {  // this . inner
    return GroupHom(inner.domain, codomain, matrix * inner.matrix);
  }

  /// Same map on generators, modulo codomain relations.
  bool equal_to(const GroupHom& o) const {
    if (matrix.cols() != o.matrix.cols()) return false;
    for (int j = 0; j < matrix.cols(); ++j)
      if (!codomain.equal(matrix.column_vec(j), o.matrix.column_vec(j)))
        return false;
    return true;
  }
};

/// A subgroup of `ambient` presented by its own generators: column j of
/// `inclusion` is the j-th generator written in ambient generator
/// coordinates; `group` is the induced presentation.
struct SubgroupPresentation {
  FGAbelianGroup group;
  IntMatrix inclusion;
};

namespace detail {

/// x-parts (first `keep` rows) of an integer kernel basis of [A | B].
inline IntMatrix projected_kernel(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix k = kernel_basis(IntMatrix::hconcat(a, b));
  IntMatrix out(a.cols(), k.cols());
  for (int i = 0; i < a.cols(); ++i)
    for (int j = 0; j < k.cols(); ++j) out(i, j) = k(i, j);
  return hermite_columns(out);
}

}  // namespace detail

/// ker f as a subgroup of the domain: generators are the x with
/// f(x) in im(relations of codomain), modulo the domain relations.
inline SubgroupPresentation kernel(const GroupHom& f) {
  IntMatrix gens = detail::projected_kernel(f.matrix, f.codomain.relations());
  IntMatrix rels = detail::projected_kernel(gens, f.domain.relations());
  return SubgroupPresentation{FGAbelianGroup(gens.cols(), rels), gens};
}

/// coker f = codomain / (im f + relations); generators are the codomain
/// generators, so the quotient projection is the identity matrix.
inline FGAbelianGroup cokernel(const GroupHom& f) {
  return FGAbelianGroup(f.codomain.generator_count(),
                        IntMatrix::hconcat(f.matrix, f.codomain.relations()));
}

inline bool is_injective(const GroupHom& f) {
  return kernel(f).group.is_trivial();
}
inline bool is_surjective(const GroupHom& f) {
  return cokernel(f).is_trivial();
}
inline bool is_isomorphism(const GroupHom& f) {
  return is_injective(f) && is_surjective(f);
}

/// Coordinates z with S z = x modulo `relations`, if x lies in the
/// subgroup spanned by the columns of S.
inline std::optional<std::vector<Int>> express_in_subgroup(
    const IntMatrix& s, const IntMatrix& relations, const std::vector<Int>& x) {
  auto sol = solve_integer(IntMatrix::hconcat(s, relations), x);
  if (!sol) return std::nullopt;
  return std::vector<Int>(sol->begin(), sol->begin() + s.cols());
}

/// Homology ker(g)/im(f) at the middle of A -f-> B -g-> C (g.f = 0 is the
/// caller's responsibility and is asserted on generators).
struct HomologyGroup {
  FGAbelianGroup group;
  IntMatrix cycle_generators;  // columns in B generator coordinates

  /// Class of a cycle b (asserted to lie in ker g via the presentation).
  std::vector<Int> class_coords(const std::vector<Int>& b,
                                const FGAbelianGroup& ambient) const {
    auto z = express_in_subgroup(cycle_generators, ambient.relations(), b);
    check_internal(z.has_value(), "vector is not a cycle");
    return group.canonical_coords(*z);
  }
};

inline HomologyGroup homology(const GroupHom& f, const GroupHom& g) {
  for (int j = 0; j < f.matrix.cols(); ++j)
    check_internal(g.codomain.is_zero(g.apply(f.matrix.column_vec(j))),
                   "homology requires g.f = 0");
  SubgroupPresentation ker_g = kernel(g);
  IntMatrix rels = detail::projected_kernel(
      ker_g.inclusion,
      IntMatrix::hconcat(f.matrix, f.codomain.relations()));
  return HomologyGroup{FGAbelianGroup(ker_g.inclusion.cols(), rels),
                       ker_g.inclusion};
}

}  // namespace gca
