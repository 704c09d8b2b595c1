#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "gca/abelian.hpp"
#include "gca/common.hpp"
#include "gca/graph.hpp"
#include "gca/intmat.hpp"
#include "gca/ktheory.hpp"
#include "gca/lattice.hpp"

namespace gca {

/// Functor of f.g. abelian groups over a finite subset poset. Nodes are
/// eager; structure homomorphisms come from a provider and are cached, so
/// pullbacks stay cheap on large lattices.
class GroupDiagram {
 public:
  GroupDiagram() = default;
  GroupDiagram(std::vector<VSet> elements, std::vector<FGAbelianGroup> nodes,
               std::function<GroupHom(int, int)> provider)
      : elements_(std::move(elements)),
        nodes_(std::move(nodes)),
        provider_(std::move(provider)),
        cache_(std::make_shared<std::map<std::pair<int, int>, GroupHom>>()) {
    check_internal(elements_.size() == nodes_.size(),
                   "diagram node count mismatch");
  }

  int size() const { return int(elements_.size()); }
  VSet element(int i) const { return elements_[i]; }
  const FGAbelianGroup& node(int i) const { return nodes_[i]; }

  int index_of(VSet w) const {
    for (int i = 0; i < size(); ++i)
      if (elements_[i] == w) return i;
    return -1;
  }

  bool leq(int i, int j) const {
    return IdealLattice::leq(elements_[i], elements_[j]);
  }

  const GroupHom& hom(int i, int j) const {
    check_internal(leq(i, j), "structure hom requires comparable nodes");
    auto key = std::make_pair(i, j);
    auto it = cache_->find(key);
    if (it != cache_->end()) return it->second;
    GroupHom h = provider_(i, j);
    check_internal(h.matrix.rows() == nodes_[j].generator_count() &&
                       h.matrix.cols() == nodes_[i].generator_count(),
                   "structure hom shape mismatch");
    return cache_->emplace(key, std::move(h)).first->second;
  }

  /// Hasse covering pairs i < j of the index poset.
  std::vector<std::pair<int, int>> cover_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j) {
        if (i == j || !leq(i, j)) continue;
        bool cover = true;
        for (int k = 0; k < size() && cover; ++k)
          if (k != i && k != j && leq(i, k) && leq(k, j)) cover = false;
        if (cover) out.emplace_back(i, j);
      }
    return out;
  }

  /// Identity on equal nodes plus composition coherence along cover chains.
  void check_coherence() const {
    for (int i = 0; i < size(); ++i)
      check_internal(hom(i, i).equal_to(GroupHom::identity(nodes_[i])),
                     "diagram must be the identity on equal nodes");
    auto covers = cover_pairs();
    for (const auto& [i, j] : covers)
      for (const auto& [j2, k] : covers) {
        if (j2 != j) continue;
        check_internal(
            hom(i, k).equal_to(hom(j, k).compose_after(hom(i, j))),
            "diagram structure maps must compose");
      }
  }

 private:
  std::vector<VSet> elements_;
  std::vector<FGAbelianGroup> nodes_;
  std::function<GroupHom(int, int)> provider_;
  std::shared_ptr<std::map<std::pair<int, int>, GroupHom>> cache_;
};

/// K-theory diagrams of a graph over its ideal lattice, with the raw
/// K-data kept for cochain assembly.
struct KDiagrams {
  IdealLattice lat;
  std::shared_ptr<std::vector<KData>> kdata;
  GroupDiagram k0, k1;
};

inline KDiagrams build_k_diagrams(const Graph& g, const IdealLattice& lat) {
  KDiagrams out;
  out.lat = lat;
  out.kdata = std::make_shared<std::vector<KData>>();
  std::vector<VSet> elements;
  std::vector<FGAbelianGroup> k0_nodes, k1_nodes;
  for (int i = 0; i < lat.size(); ++i) {
    elements.push_back(lat.element(i));
    out.kdata->push_back(k_groups(g, lat.element(i)));
    k0_nodes.push_back(out.kdata->back().k0);
    k1_nodes.push_back(out.kdata->back().k1);
  }
  auto graph = std::make_shared<Graph>(g);
  auto kdata = out.kdata;
  out.k0 = GroupDiagram(elements, k0_nodes, [graph, kdata](int i, int j) {
    return induced_k_maps(*graph, (*kdata)[i], (*kdata)[j]).first;
  });
  out.k1 = GroupDiagram(elements, k1_nodes, [graph, kdata](int i, int j) {
    return induced_k_maps(*graph, (*kdata)[i], (*kdata)[j]).second;
  });
  return out;
}

inline GroupDiagram build_k_diagram(const Graph& g, const IdealLattice& lat,
                                    int degree) {
  check_internal(degree == 0 || degree == 1, "degree must be 0 or 1");
  KDiagrams kds = build_k_diagrams(g, lat);
  return degree == 0 ? kds.k0 : kds.k1;
}

/// psi* Y: node at i is Y at psi[i]; psi must be monotone.
inline GroupDiagram pullback_diagram(const std::vector<VSet>& index_elements,
                                     const std::vector<int>& psi,
                                     const GroupDiagram& y) {
  require(psi.size() == index_elements.size(), ErrorKind::NotMonotone,
          "psi must cover the whole index poset");
  std::vector<FGAbelianGroup> nodes;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    require(psi[i] >= 0 && psi[i] < y.size(), ErrorKind::NotMonotone,
            "psi image out of range");
    nodes.push_back(y.node(psi[i]));
  }
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t j = 0; j < psi.size(); ++j)
      if (IdealLattice::leq(index_elements[i], index_elements[j]))
        require(y.leq(psi[i], psi[j]), ErrorKind::NotMonotone,
                "psi is not monotone");
  return GroupDiagram(index_elements, nodes, [psi, y](int i, int j) {
    return y.hom(psi[i], psi[j]);
  });
}

/// Natural transformation candidate: one matrix per node.
struct DiagramMorphism {
  std::vector<IntMatrix> components;  // node i: Y gens x X gens
};

/// Naturality on covering pairs (which propagates along chains).
inline bool is_natural(const GroupDiagram& x, const GroupDiagram& y,
                       const DiagramMorphism& m) {
  if (int(m.components.size()) != x.size()) return false;
  for (int i = 0; i < x.size(); ++i)
    if (m.components[i].rows() != y.node(i).generator_count() ||
        m.components[i].cols() != x.node(i).generator_count())
      return false;
  for (const auto& [i, j] : x.cover_pairs()) {
    IntMatrix lhs = y.hom(i, j).matrix * m.components[i];
    IntMatrix rhs = m.components[j] * x.hom(i, j).matrix;
    for (int c = 0; c < lhs.cols(); ++c)
      if (!y.node(j).equal(lhs.column_vec(c), rhs.column_vec(c)))
        return false;
  }
  return true;
}

namespace detail {

inline FGAbelianGroup direct_sum(const std::vector<FGAbelianGroup>& parts,
                                 std::vector<int>* offsets) {
  int gens = 0, rels = 0;
  offsets->clear();
  for (const auto& p : parts) {
    offsets->push_back(gens);
    gens += p.generator_count();
    rels += p.relations().cols();
  }
  IntMatrix r(gens, rels);
  int go = 0, ro = 0;
  for (const auto& p : parts) {
    for (int i = 0; i < p.generator_count(); ++i)
      for (int j = 0; j < p.relations().cols(); ++j)
        r(go + i, ro + j) = p.relations()(i, j);
    go += p.generator_count();
    ro += p.relations().cols();
  }
  return FGAbelianGroup(gens, r);
}

}  // namespace detail

/// Hom(X, Y) for a diagram X with free nodes, presented as the kernel of
/// the naturality constraint map inside D = prod over nodes of
/// Y_i^{gens X_i}. D coordinates: node block, then per X generator the Y
/// coordinates contiguously.
struct DiagramHomGroup {
  FGAbelianGroup group;
  IntMatrix inclusion;  // generators in D coordinates
  FGAbelianGroup d_group;
  std::vector<int> node_offsets;
  std::vector<int> x_gens, y_gens;
};

inline DiagramHomGroup hom_diagram(const GroupDiagram& x,
                                   const GroupDiagram& y,
                                   const std::vector<int>* node_subset =
                                       nullptr) {
  check_internal(x.size() == y.size(), "hom_diagram index poset mismatch");
  for (int i = 0; i < x.size(); ++i)
    check_internal(x.node(i).relations().cols() == 0,
                   "hom_diagram requires freely presented X nodes");

  std::vector<char> active(x.size(), 1);
  if (node_subset) {
    active.assign(x.size(), 0);
    for (int i : *node_subset) active[i] = 1;
  }

  DiagramHomGroup out;
  out.node_offsets.assign(x.size(), 0);
  out.x_gens.assign(x.size(), 0);
  out.y_gens.assign(x.size(), 0);
  std::vector<FGAbelianGroup> d_parts;
  std::vector<int> part_offsets;
  int total = 0;
  for (int i = 0; i < x.size(); ++i) {
    out.x_gens[i] = active[i] ? x.node(i).generator_count() : 0;
    out.y_gens[i] = y.node(i).generator_count();
    out.node_offsets[i] = total;
    for (int b = 0; b < out.x_gens[i]; ++b) d_parts.push_back(y.node(i));
    total += out.x_gens[i] * out.y_gens[i];
  }
  out.d_group = detail::direct_sum(d_parts, &part_offsets);
  check_internal(out.d_group.generator_count() == total,
                 "D block layout mismatch");

  // naturality constraints on covers within the active subposet
  std::vector<FGAbelianGroup> e_parts;
  struct Row {
    int i, j, b;
  };
  std::vector<Row> rows;
  for (const auto& [i, j] : x.cover_pairs()) {
    if (!active[i] || !active[j]) continue;
    for (int b = 0; b < out.x_gens[i]; ++b) {
      e_parts.push_back(y.node(j));
      rows.push_back({i, j, b});
    }
  }
  std::vector<int> e_offsets;
  FGAbelianGroup e_group = detail::direct_sum(e_parts, &e_offsets);
  IntMatrix phi(e_group.generator_count(), total);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& [i, j, b] = rows[r];
    const IntMatrix& iota = y.hom(i, j).matrix;
    const IntMatrix& s = x.hom(i, j).matrix;
    // iota applied to the (i, b) block
    for (int t = 0; t < out.y_gens[i]; ++t)
      for (int u = 0; u < out.y_gens[j]; ++u)
        phi(e_offsets[r] + u, out.node_offsets[i] + b * out.y_gens[i] + t) +=
            iota(u, t);
    // minus the (j, b') blocks weighted by the X structure map
    for (int b2 = 0; b2 < out.x_gens[j]; ++b2) {
      if (s(b2, b) == 0) continue;
      for (int u = 0; u < out.y_gens[j]; ++u)
        phi(e_offsets[r] + u,
            out.node_offsets[j] + b2 * out.y_gens[j] + u) -= s(b2, b);
    }
  }
  SubgroupPresentation k = kernel(GroupHom(out.d_group, e_group, phi));
  out.group = k.group;
  out.inclusion = k.inclusion;
  return out;
}

inline DiagramMorphism hom_element_to_morphism(const DiagramHomGroup& h,
                                               const std::vector<Int>& coeffs) {
  std::vector<Int> d = h.inclusion.apply(coeffs);
  DiagramMorphism m;
  for (std::size_t i = 0; i < h.x_gens.size(); ++i) {
    IntMatrix comp(h.y_gens[i], h.x_gens[i]);
    for (int b = 0; b < h.x_gens[i]; ++b)
      for (int t = 0; t < h.y_gens[i]; ++t)
        comp(t, b) = d[h.node_offsets[i] + b * h.y_gens[i] + t];
    m.components.push_back(std::move(comp));
  }
  return m;
}

inline std::optional<std::vector<Int>> morphism_to_hom_coords(
    const DiagramHomGroup& h, const DiagramMorphism& m) {
  std::vector<Int> d(h.d_group.generator_count(), Int(0));
  for (std::size_t i = 0; i < h.x_gens.size(); ++i)
    for (int b = 0; b < h.x_gens[i]; ++b)
      for (int t = 0; t < h.y_gens[i]; ++t)
        d[h.node_offsets[i] + b * h.y_gens[i] + t] = m.components[i](t, b);
  return express_in_subgroup(h.inclusion, h.d_group.relations(), d);
}

/// Hom(Z[S, I_p], Y) realized as the product of Y at the ideals generated
/// by each vertex of S.
struct FreeDiagramHom {
  FGAbelianGroup group;  // the product, block per vertex of S
  std::vector<int> s_vertices;
  std::vector<int> offsets;     // into the product generators
  std::vector<int> node_index;  // lattice index of <v>
};

inline FreeDiagramHom hom_free_diagram(const Graph& g, const IdealLattice& lat,
                                       VSet s, const GroupDiagram& y) {
  FreeDiagramHom out;
  std::vector<FGAbelianGroup> parts;
  for (int v : vset_vertices(s)) {
    out.s_vertices.push_back(v);
    int idx = lat.index_of(hs_closure(g, vset_single(v)));
    check_internal(idx >= 0, "generated ideal must be a lattice element");
    out.node_index.push_back(idx);
    parts.push_back(y.node(idx));
  }
  out.group = detail::direct_sum(parts, &out.offsets);
  return out;
}

/// The diagram morphism xi with xi_W(delta_v) = iota_{W,<v>}(y_v) for a
/// family y in the product.
inline DiagramMorphism free_family_to_morphism(const Graph& g,
                                               const IdealLattice& lat,
                                               const FreeDiagramHom& h,
                                               const GroupDiagram& y,
                                               const std::vector<Int>& family) {
  DiagramMorphism m;
  for (int i = 0; i < lat.size(); ++i) {
    VSet w = lat.element(i);
    std::vector<int> cols;
    for (std::size_t k = 0; k < h.s_vertices.size(); ++k)
      if (vset_contains(w, h.s_vertices[k])) cols.push_back(int(k));
    IntMatrix comp(y.node(i).generator_count(), int(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      int k = cols[c];
      const IntMatrix& iota = y.hom(h.node_index[k], i).matrix;
      std::vector<Int> yk(y.node(h.node_index[k]).generator_count());
      for (std::size_t t = 0; t < yk.size(); ++t)
        yk[t] = family[h.offsets[k] + int(t)];
      std::vector<Int> img = iota.apply(yk);
      for (std::size_t t = 0; t < img.size(); ++t) comp(int(t), int(c)) = img[t];
    }
    m.components.push_back(std::move(comp));
  }
  return m;
}

/// Three-term cochain complex computing Ext^0, Ext^1, Ext^2 of the K1
/// diagram against Y: C0 and C1 are products of Y at singly generated
/// ideals (of all vertices resp. regular vertices), C2 = Hom(K1, Y);
/// d0 = (id - M)^*, d1 = kappa^*.
struct CochainComplex {
  FGAbelianGroup c0, c1, c2;
  GroupHom d0, d1;
  FreeDiagramHom c0_layout, c1_layout;
  DiagramHomGroup c2_hom;
};

namespace detail {

/// The matrix of d0: (d0 y)_w = y_w - sum over e in E^w of
/// iota_{<w>,<s(e)>}(y_{s(e)}), in the product layouts.
inline IntMatrix assemble_d0(const Graph& g, const GroupDiagram& y,
                             const FreeDiagramHom& c0l,
                             const FreeDiagramHom& c1l) {
  IntMatrix d0(c1l.group.generator_count(), c0l.group.generator_count());
  for (std::size_t wi = 0; wi < c1l.s_vertices.size(); ++wi) {
    int w = c1l.s_vertices[wi];
    int w_node = c1l.node_index[wi];
    int w_gens = y.node(w_node).generator_count();
    auto c0_block = [&](int v) {
      auto it = std::lower_bound(c0l.s_vertices.begin(), c0l.s_vertices.end(),
                                 v);
      return int(it - c0l.s_vertices.begin());
    };
    int wb = c0_block(w);
    for (int t = 0; t < w_gens; ++t)
      d0(c1l.offsets[wi] + t, c0l.offsets[wb] + t) += 1;
    for (int e : g.incoming(w)) {
      int v = g.src(e);
      int vb = c0_block(v);
      const IntMatrix& iota = y.hom(c0l.node_index[vb], w_node).matrix;
      for (int t = 0; t < iota.rows(); ++t)
        for (int u = 0; u < iota.cols(); ++u)
          d0(c1l.offsets[wi] + t, c0l.offsets[vb] + u) -= iota(t, u);
    }
  }
  return d0;
}

}  // namespace detail

inline CochainComplex cochain_complex(
    const Graph& g, const KDiagrams& kd, const GroupDiagram& y,
    const std::vector<int>* c2_node_subset = nullptr) {
  require(y.size() == kd.lat.size(), ErrorKind::IndexMismatch,
          "Y must be indexed by the graph's ideal lattice");
  for (int i = 0; i < y.size(); ++i)
    require(y.element(i) == kd.lat.element(i), ErrorKind::IndexMismatch,
            "Y must be indexed by the graph's ideal lattice");

  CochainComplex cc;
  cc.c0_layout = hom_free_diagram(g, kd.lat, g.all_vertices(), y);
  cc.c1_layout = hom_free_diagram(g, kd.lat, g.regular_vertices(), y);
  cc.c0 = cc.c0_layout.group;
  cc.c1 = cc.c1_layout.group;
  cc.c2_hom = hom_diagram(kd.k1, y, c2_node_subset);
  cc.c2 = cc.c2_hom.group;

  IntMatrix d0 = detail::assemble_d0(g, y, cc.c0_layout, cc.c1_layout);
  cc.d0 = GroupHom(cc.c0, cc.c1, d0);
  check_internal(cc.d0.is_well_defined(), "d0 must respect Y relations");

  // d1 on a C1 generator: evaluate kappa^* in D coordinates, then express
  // in the Hom(K1, Y) presentation
  IntMatrix d1(cc.c2.generator_count(), cc.c1.generator_count());
  for (int col = 0; col < cc.c1.generator_count(); ++col) {
    // locate the block (w, t) of this generator
    std::size_t wi = 0;
    while (wi + 1 < cc.c1_layout.offsets.size() &&
           cc.c1_layout.offsets[wi + 1] <= col)
      ++wi;
    int w = cc.c1_layout.s_vertices[wi];
    int w_node = cc.c1_layout.node_index[wi];
    int t = col - cc.c1_layout.offsets[wi];
    std::vector<Int> d_elem(cc.c2_hom.d_group.generator_count(), Int(0));
    for (int i = 0; i < kd.lat.size(); ++i) {
      const KData& data = (*kd.kdata)[i];
      if (cc.c2_hom.x_gens[i] == 0) continue;
      int pos = int(std::lower_bound(data.w_reg_vertices.begin(),
                                     data.w_reg_vertices.end(), w) -
                    data.w_reg_vertices.begin());
      if (pos == int(data.w_reg_vertices.size()) ||
          data.w_reg_vertices[pos] != w)
        continue;
      const IntMatrix& iota = y.hom(w_node, i).matrix;
      for (int b = 0; b < cc.c2_hom.x_gens[i]; ++b) {
        const Int& coeff = data.k1_basis(pos, b);
        if (coeff == 0) continue;
        for (int u = 0; u < cc.c2_hom.y_gens[i]; ++u)
          d_elem[cc.c2_hom.node_offsets[i] + b * cc.c2_hom.y_gens[i] + u] +=
              coeff * iota(u, t);
      }
    }
    auto z = express_in_subgroup(cc.c2_hom.inclusion,
                                 cc.c2_hom.d_group.relations(), d_elem);
    check_internal(z.has_value(), "kappa^* image must be natural");
    for (int r = 0; r < d1.rows(); ++r) d1(r, col) = (*z)[r];
  }
  cc.d1 = GroupHom(cc.c1, cc.c2, d1);

  // d1 . d0 = 0, reflecting (id - M) . kappa = 0
  IntMatrix comp = d1 * d0;
  for (int j = 0; j < comp.cols(); ++j)
    check_internal(cc.c2.is_zero(comp.column_vec(j)),
                   "cochain complex requires d1 . d0 = 0");
  return cc;
}

struct ExtGroups {
  FGAbelianGroup ext0, ext1, ext2;
  HomologyGroup ext1_data;
};

inline ExtGroups ext_groups(const CochainComplex& cc) {
  ExtGroups out;
  out.ext0 = kernel(cc.d0).group;
  out.ext1_data = homology(cc.d0, cc.d1);
  out.ext1 = out.ext1_data.group;
  out.ext2 = cokernel(cc.d1);
  return out;
}

/// A class in Ext^2 represented by the natural transformation eta: K1 -> Y
/// is zero iff it factors through kappa, i.e. kappa^* beta = eta for some
/// beta in C1; returns that beta.
inline std::optional<std::vector<Int>> represents_zero_ext2(
    const GroupDiagram& k1, const GroupDiagram& y, const CochainComplex& cc,
    const DiagramMorphism& eta) {
  require(is_natural(k1, y, eta), ErrorKind::NotNatural,
          "eta must be a natural transformation");
  auto z = morphism_to_hom_coords(cc.c2_hom, eta);
  require(z.has_value(), ErrorKind::NotNatural,
          "eta must lie in the computed Hom group");
  auto sol = solve_integer(
      IntMatrix::hconcat(cc.d1.matrix, cc.c2.relations()), *z);
  if (!sol) return std::nullopt;
  return std::vector<Int>(sol->begin(),
                          sol->begin() + cc.c1.generator_count());
}

struct Ext1Class {
  std::vector<Int> coords;             // in the Ext^1 presentation
  bool zero = false;
  std::vector<Int> witness;            // y in C0 with d0(y) = upsilon
};

inline Ext1Class ext1_class(const CochainComplex& cc,
                            const std::vector<Int>& upsilon) {
  require(cc.c2.is_zero(cc.d1.apply(upsilon)), ErrorKind::NotACocycle,
          "upsilon must be a d1 cocycle");
  Ext1Class out;
  HomologyGroup h = homology(cc.d0, cc.d1);
  out.coords = h.class_coords(upsilon, cc.c1);
  out.zero = true;
  for (const Int& c : out.coords)
    if (c != 0) out.zero = false;
  if (out.zero) {
    auto sol = solve_integer(
        IntMatrix::hconcat(cc.d0.matrix, cc.c1.relations()), upsilon);
    check_internal(sol.has_value(), "zero class must have a d0 preimage");
    out.witness.assign(sol->begin(),
                       sol->begin() + cc.c0.generator_count());
  }
  return out;
}

}  // namespace gca
