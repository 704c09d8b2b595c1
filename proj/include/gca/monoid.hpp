#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gca/common.hpp"
#include "gca/graph.hpp"
#include "gca/ktheory.hpp"
#include "gca/lattice.hpp"

namespace gca {

/// Element of N[V]: nonnegative coefficients in lexicographic vertex order.
using MonoidElement = std::vector<Int>;

inline MonoidElement zero_element(const Graph& g) {
  return MonoidElement(g.vertex_count(), Int(0));
}

inline MonoidElement add_elements(const MonoidElement& a,
                                  const MonoidElement& b) {
  check_internal(a.size() == b.size(), "monoid element length mismatch");
  MonoidElement out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline VSet element_support(const MonoidElement& c) {
  VSet s = 0;
  for (std::size_t v = 0; v < c.size(); ++v) {
    check_internal(c[v] >= 0, "monoid coefficients must be nonnegative");
    if (c[v] != 0) s |= vset_single(int(v));
  }
  return s;
}

/// Hereditary saturated support <supp c>.
inline VSet supp_ideal(const Graph& g, const MonoidElement& c) {
  return hs_closure(g, element_support(c));
}

namespace detail {

inline std::vector<Int> restrict_to(const MonoidElement& c, VSet w) {
  std::vector<Int> out;
  for (int v : vset_vertices(w)) out.push_back(c[v]);
  return out;
}

}  // namespace detail

/// Equality in the projection monoid: equal hereditary saturated supports
/// and equal K0 classes there. Complete for graph algebras thanks to
/// stable weak cancellation.
inline bool equal_in_P(const Graph& g, const MonoidElement& c1,
                       const MonoidElement& c2) {
  VSet w = supp_ideal(g, c1);
  if (supp_ideal(g, c2) != w) return false;
  if (w == 0) return true;
  KData kd = k_groups(g, w);
  return kd.k0.equal(detail::restrict_to(c1, w), detail::restrict_to(c2, w));
}

/// The support preorder: c1 prec c2 iff <supp c1> is inside <supp c2>.
inline bool prec(const Graph& g, const MonoidElement& c1,
                 const MonoidElement& c2) {
  return IdealLattice::leq(supp_ideal(g, c1), supp_ideal(g, c2));
}

enum class LeqAnswer { Yes, No, Unknown };

struct LeqResult {
  LeqAnswer answer = LeqAnswer::Unknown;
  MonoidElement witness;  // c' with c1 + c' = c2 in P, for Yes
  long long bound_used = 0;
};

/// Subprojection order: is there c' >= 0 with c1 + c' = c2 in P?
/// No via the support preorder or a cone obstruction; yes by bounded
/// enumeration of witnesses over supp_ideal(c2).
inline LeqResult leq_in_P(const Graph& g, const MonoidElement& c1,
                          const MonoidElement& c2, long long bound = 12) {
  LeqResult res;
  res.bound_used = bound;
  if (equal_in_P(g, c1, c2)) {
    res.answer = LeqAnswer::Yes;
    res.witness = zero_element(g);
    return res;
  }
  if (!prec(g, c1, c2)) {
    res.answer = LeqAnswer::No;
    return res;
  }
  VSet w = supp_ideal(g, c2);
  KData kd = k_groups(g, w);
  // pi(c') must equal pi(c2) - pi(c1) and lie in the cone
  std::vector<Int> diff = detail::restrict_to(c2, w);
  std::vector<Int> r1 = detail::restrict_to(c1, w);
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= r1[i];
  ConeResult cone = positive_cone_member(g, kd, diff, bound);
  if (cone.answer == ConeAnswer::No) {
    res.answer = LeqAnswer::No;
    return res;
  }

  std::vector<int> wv = vset_vertices(w);
  std::vector<Int> target = kd.k0.canonical_coords(diff);
  MonoidElement cand(wv.size(), Int(0));
  // depth-first enumeration of coefficient vectors over W, bounded
  auto dfs = [&](auto&& self, std::size_t idx) -> bool {
    if (idx == cand.size()) {
      if (kd.k0.canonical_coords(cand) != target) return false;
      MonoidElement full = zero_element(g);
      for (std::size_t i = 0; i < wv.size(); ++i) full[wv[i]] = cand[i];
      return supp_ideal(g, add_elements(c1, full)) == w;
    }
    for (long long v = 0; v <= bound; ++v) {
      cand[idx] = v;
      if (self(self, idx + 1)) return true;
    }
    cand[idx] = 0;
    return false;
  };
  if (!wv.empty() && dfs(dfs, 0)) {
    res.answer = LeqAnswer::Yes;
    res.witness = zero_element(g);
    for (std::size_t i = 0; i < wv.size(); ++i) res.witness[wv[i]] = cand[i];
    return res;
  }
  res.answer = LeqAnswer::Unknown;
  return res;
}

enum class OracleAnswer { Equal, Distinct, Inconclusive };

inline constexpr std::size_t kDefaultOracleStateCap = 100000;

/// Independent sanity oracle for equal_in_P: BFS over the congruence
/// generated by delta_v <-> sum of delta_{s(e)} over e in E^v (v regular),
/// applied in either direction. Distinct only when the whole congruence
/// class of c1 was exhausted.
inline OracleAnswer congruence_oracle(
    const Graph& g, const MonoidElement& c1, const MonoidElement& c2,
    int depth, std::size_t state_cap = kDefaultOracleStateCap) {
  if (c1 == c2) return OracleAnswer::Equal;
  std::vector<int> regs;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.is_regular(v)) regs.push_back(v);

  auto key = [](const MonoidElement& c) {
    std::string k;
    for (const Int& x : c) {
      k += x.str();
      k += ',';
    }
    return k;
  };
  std::map<std::string, char> seen;
  std::vector<MonoidElement> frontier{c1};
  seen[key(c1)] = 1;
  bool capped = false;
  for (int d = 0; d < depth && !frontier.empty() && !capped; ++d) {
    std::vector<MonoidElement> next;
    for (const auto& c : frontier) {
      for (int v : regs) {
        // forward: expand one delta_v
        if (c[v] >= 1) {
          MonoidElement e = c;
          e[v] -= 1;
          for (int ed : g.incoming(v)) e[g.src(ed)] += 1;
          if (e == c2) return OracleAnswer::Equal;
          auto k = key(e);
          if (!seen.count(k)) {
            if (seen.size() >= state_cap) {
              capped = true;
              break;
            }
            seen[k] = 1;
            next.push_back(std::move(e));
          }
        }
        // backward: collapse the sources of E^v into one delta_v
        MonoidElement e = c;
        bool ok = true;
        for (int ed : g.incoming(v)) {
          if (e[g.src(ed)] < 1) {
            ok = false;
            break;
          }
          e[g.src(ed)] -= 1;
        }
        if (!ok) continue;
        e[v] += 1;
        if (e == c2) return OracleAnswer::Equal;
        auto k = key(e);
        if (!seen.count(k)) {
          if (seen.size() >= state_cap) {
            capped = true;
            break;
          }
          seen[k] = 1;
          next.push_back(std::move(e));
        }
      }
      if (capped) break;
    }
    frontier = std::move(next);
  }
  if (!capped && frontier.empty()) return OracleAnswer::Distinct;
  return OracleAnswer::Inconclusive;
}

/// Monoid homomorphism P(C*(G)) -> P(C*(G')) given on vertex generators.
struct MonoidHom {
  std::vector<MonoidElement> images;  // index = vertex of the domain graph
  bool verified = false;
};

inline MonoidHom verify_monoid_hom(const Graph& g, const Graph& g2,
                                   const std::vector<MonoidElement>& images) {
  require(int(images.size()) == g.vertex_count(), ErrorKind::MissingImage,
          "an image is required for every vertex");
  for (const auto& img : images)
    require(int(img.size()) == g2.vertex_count(), ErrorKind::MissingImage,
            "image has wrong coefficient length");
  MonoidHom hom;
  hom.images = images;
  hom.verified = true;
  for (int v = 0; v < g.vertex_count() && hom.verified; ++v) {
    if (!g.is_regular(v)) continue;
    MonoidElement sum = zero_element(g2);
    for (int e : g.incoming(v)) sum = add_elements(sum, images[g.src(e)]);
    if (!equal_in_P(g2, images[v], sum)) hom.verified = false;
  }
  return hom;
}

/// The induced monotone map psi on the ideal lattice: psi(W) is the
/// support ideal of the summed images of W's vertices.
inline std::vector<VSet> monoid_hom_psi(const Graph& g,
                                        const IdealLattice& lat,
                                        const Graph& g2,
                                        const MonoidHom& hom) {
  std::vector<VSet> out(lat.size());
  for (int i = 0; i < lat.size(); ++i) {
    MonoidElement sum = zero_element(g2);
    for (int v : vset_vertices(lat.element(i)))
      sum = add_elements(sum, hom.images[v]);
    out[i] = supp_ideal(g2, sum);
  }
  return out;
}

}  // namespace gca
