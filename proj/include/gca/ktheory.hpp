#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gca/abelian.hpp"
#include "gca/common.hpp"
#include "gca/graph.hpp"
#include "gca/intmat.hpp"
#include "gca/lattice.hpp"

namespace gca {

inline std::vector<int> vset_vertices(VSet s) {
  std::vector<int> out;
  for (int v = 0; v < kMaxVertices; ++v)
    if (vset_contains(s, v)) out.push_back(v);
  return out;
}

/// Position of v in the sorted vertex list of s, or -1.
inline int vset_position(VSet s, int v) {
  if (!vset_contains(s, v)) return -1;
  return vset_size(s & (vset_single(v) - 1));
}

/// K-theory of the gauge-invariant ideal at W. Generators of K0 are the
/// classes [delta_v] for v in W (lexicographic order); K1 is free with the
/// stored kernel basis in Z[W_reg] coordinates.
struct KData {
  VSet w = 0;
  std::vector<int> w_vertices;      // sorted
  std::vector<int> w_reg_vertices;  // sorted, = W intersect V_reg
  IntMatrix id_minus_m;             // |W| x |W_reg|
  FGAbelianGroup k0;
  FGAbelianGroup k1;          // free
  IntMatrix k1_basis;         // |W_reg| x rank(K1), Hermite-canonical
};

/// id - M on Z[W_reg] -> Z[W], with (M delta_w) = sum over e in E^w of
/// delta_{s(e)}; W hereditary keeps every column inside Z[W].
inline IntMatrix id_minus_m_matrix(const Graph& g, VSet w) {
  std::vector<int> wv = vset_vertices(w);
  std::vector<int> wr;
  for (int v : wv)
    if (g.is_regular(v)) wr.push_back(v);
  IntMatrix a(int(wv.size()), int(wr.size()));
  for (int j = 0; j < int(wr.size()); ++j) {
    int v = wr[j];
    a(vset_position(w, v), j) += 1;
    for (int e : g.incoming(v)) {
      int s = g.src(e);
      check_internal(vset_contains(w, s),
                     "hereditary set must contain edge sources of its ranges");
      a(vset_position(w, s), j) -= 1;
    }
  }
  return a;
}

inline KData k_groups(const Graph& g, VSet w) {
  require(is_hereditary_saturated(g, w), ErrorKind::NotHereditarySaturated,
          "k_groups requires a hereditary saturated vertex set");
  KData kd;
  kd.w = w;
  kd.w_vertices = vset_vertices(w);
  for (int v : kd.w_vertices)
    if (g.is_regular(v)) kd.w_reg_vertices.push_back(v);
  kd.id_minus_m = id_minus_m_matrix(g, w);
  kd.k0 = FGAbelianGroup(int(kd.w_vertices.size()), kd.id_minus_m);
  kd.k1_basis = kernel_basis(kd.id_minus_m);
  kd.k1 = FGAbelianGroup::free_group(kd.k1_basis.cols());
  // exactness witnesses: pi kills every column of id - M, and the kernel
  // basis columns are independent
  for (int j = 0; j < kd.id_minus_m.cols(); ++j)
    check_internal(kd.k0.is_zero(kd.id_minus_m.column_vec(j)),
                   "projection must annihilate the image of id - M");
  check_internal(smith_normal_form(kd.k1_basis).rank == kd.k1_basis.cols(),
                 "kernel basis must be linearly independent");
  check_internal((kd.id_minus_m * kd.k1_basis).is_zero(),
                 "kernel basis must lie in ker(id - M)");
  return kd;
}

/// Maps K_i(W1) -> K_i(W2) induced by the inclusion W1 into W2: degree 0
/// is Z[W1] into Z[W2] on cokernels, degree 1 extension-by-zero expressed
/// in the target kernel basis.
inline std::pair<GroupHom, GroupHom> induced_k_maps(const Graph& g,
                                                    const KData& k1data,
                                                    const KData& k2data) {
  require(IdealLattice::leq(k1data.w, k2data.w), ErrorKind::NotNested,
          "induced_k_maps requires nested sets");
  IntMatrix m0(int(k2data.w_vertices.size()), int(k1data.w_vertices.size()));
  for (int j = 0; j < int(k1data.w_vertices.size()); ++j)
    m0(vset_position(k2data.w, k1data.w_vertices[j]), j) = 1;
  GroupHom h0(k1data.k0, k2data.k0, m0);
  check_internal(h0.is_well_defined(),
                 "inclusion must map relations into relations");

  IntMatrix m1(k2data.k1_basis.cols(), k1data.k1_basis.cols());
  for (int j = 0; j < k1data.k1_basis.cols(); ++j) {
    std::vector<Int> ext(k2data.w_reg_vertices.size(), Int(0));
    for (int i = 0; i < int(k1data.w_reg_vertices.size()); ++i) {
      int pos = int(std::lower_bound(k2data.w_reg_vertices.begin(),
                                     k2data.w_reg_vertices.end(),
                                     k1data.w_reg_vertices[i]) -
                    k2data.w_reg_vertices.begin());
      ext[pos] = k1data.k1_basis(i, j);
    }
    check_internal(
        [&] {
          std::vector<Int> img = k2data.id_minus_m.apply(ext);
          for (const Int& x : img)
            if (x != 0) return false;
          return true;
        }(),
        "extension by zero must stay in the kernel");
    auto sol = solve_integer(k2data.k1_basis, ext);
    check_internal(sol.has_value(),
                   "extended kernel vector must lie in the target basis span");
    for (int i = 0; i < m1.rows(); ++i) m1(i, j) = (*sol)[i];
  }
  GroupHom h1(k1data.k1, k2data.k1, m1);
  return {h0, h1};
}

enum class ConeAnswer { Yes, No, Unknown };

struct ConeResult {
  ConeAnswer answer = ConeAnswer::Unknown;
  std::vector<Int> witness;  // nonneg coefficients over W vertices, for Yes
  long long bound_used = 0;
};

namespace detail {

inline std::string coords_key(const std::vector<Int>& c) {
  std::string k;
  for (const Int& x : c) {
    k += x.str();
    k += ',';
  }
  return k;
}

struct ConeSearch {
  std::optional<std::vector<Int>> witness;
  bool capped = false;  // state cap tripped, search not exhaustive
};

/// BFS over reachable canonical K0 coordinates, one delta_v per step,
/// reconstructing a nonnegative witness on success. State count capped.
inline ConeSearch cone_bfs(
    const KData& kd, const std::vector<Int>& target,
    std::size_t state_cap,
    const std::vector<std::vector<Int>>* window = nullptr) {
  const int n = int(kd.w_vertices.size());
  std::vector<std::vector<Int>> gen_delta(n);
  std::vector<std::vector<Int>> zero_coords(1, std::vector<Int>(n, Int(0)));
  std::vector<Int> start = kd.k0.canonical_coords(zero_coords[0]);
  for (int j = 0; j < n; ++j) {
    std::vector<Int> e(n, Int(0));
    e[j] = 1;
    gen_delta[j] = kd.k0.canonical_coords(e);
  }
  const int torsion = kd.k0.torsion_count();
  auto add = [&](const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      out[i] = a[i] + b[i];
      if (int(i) < torsion) {
        Int d = kd.k0.torsion()[i];
        out[i] %= d;
        if (out[i] < 0) out[i] += d;
      }
    }
    return out;
  };
  auto in_window = [&](const std::vector<Int>& c) {
    if (!window) return true;
    for (std::size_t i = torsion; i < c.size(); ++i) {
      if (c[i] < (*window)[0][i] || c[i] > (*window)[1][i]) return false;
    }
    return true;
  };

  ConeSearch out;
  std::map<std::string, std::pair<std::string, int>> parent;
  std::vector<std::vector<Int>> frontier{start};
  parent[coords_key(start)] = {"", -1};
  std::string target_key = coords_key(target);
  while (!frontier.empty() && !parent.count(target_key)) {
    std::vector<std::vector<Int>> next;
    for (const auto& c : frontier) {
      std::string ck = coords_key(c);
      for (int j = 0; j < n; ++j) {
        std::vector<Int> d = add(c, gen_delta[j]);
        if (!in_window(d)) continue;
        std::string dk = coords_key(d);
        if (parent.count(dk)) continue;
        if (parent.size() >= state_cap) {
          out.capped = true;
          break;
        }
        parent[dk] = {ck, j};
        next.push_back(d);
      }
      if (out.capped) break;
    }
    if (out.capped) break;
    frontier = std::move(next);
  }
  if (!parent.count(target_key)) return out;
  std::vector<Int> witness(n, Int(0));
  std::string k = target_key;
  while (parent[k].second >= 0) {
    witness[parent[k].second] += 1;
    k = parent[k].first;
  }
  out.witness = std::move(witness);
  return out;
}

}  // namespace detail

/// Decides whether a K0 class (given in delta_v coordinates over W) lies
/// in the positive cone pi(N[W]). Complete for free rank 0; for rank 1
/// a sign certificate rules out, a windowed search confirms; otherwise a
/// bounded search with an honest unknown.
inline ConeResult positive_cone_member(const Graph& g, const KData& kd,
                                       const std::vector<Int>& x,
                                       long long bound = 12,
                                       std::size_t state_cap = 200000) {
  (void)g;
  ConeResult res;
  res.bound_used = bound;
  const int n = int(kd.w_vertices.size());
  check_internal(int(x.size()) == n, "cone query coordinate length mismatch");
  bool x_nonneg = true;
  for (const Int& c : x)
    if (c < 0) x_nonneg = false;
  if (x_nonneg) {
    res.answer = ConeAnswer::Yes;
    res.witness = x;
    return res;
  }
  std::vector<Int> target = kd.k0.canonical_coords(x);
  bool target_zero = true;
  for (const Int& c : target)
    if (c != 0) target_zero = false;
  if (target_zero) {
    res.answer = ConeAnswer::Yes;
    res.witness.assign(n, Int(0));
    return res;
  }

  const int rank = kd.k0.free_rank();
  const int torsion = kd.k0.torsion_count();

  // Sign certificates: a free functional nonnegative on every generator
  // but negative on x separates x from the cone (and symmetrically).
  std::vector<std::vector<Int>> gen_values(rank, std::vector<Int>(n));
  for (int i = 0; i < rank; ++i) {
    std::vector<Int> f = kd.k0.free_functional(i);
    for (int j = 0; j < n; ++j) gen_values[i][j] = f[j];
    const Int& t = target[torsion + i];
    bool all_nonneg = true, all_nonpos = true;
    for (const Int& a : gen_values[i]) {
      if (a < 0) all_nonneg = false;
      if (a > 0) all_nonpos = false;
    }
    if ((all_nonneg && t < 0) || (all_nonpos && t > 0)) {
      res.answer = ConeAnswer::No;
      return res;
    }
  }

  if (rank == 0) {
    // finite K0: the cone is all of it; an uncapped BFS always reaches it
    auto s = detail::cone_bfs(kd, target, state_cap);
    if (!s.witness) {
      check_internal(s.capped, "finite K0 cone must reach every class");
      res.answer = ConeAnswer::Unknown;
      return res;
    }
    res.answer = ConeAnswer::Yes;
    res.witness = *s.witness;
    return res;
  }

  // Windowed search: free coordinates confined to a box around 0 and the
  // target, padded by `bound` times the largest generator step.
  std::vector<std::vector<Int>> window(2, std::vector<Int>(target.size()));
  for (int i = 0; i < rank; ++i) {
    Int mx = 0;
    for (const Int& a : gen_values[i])
      if (abs(a) > mx) mx = abs(a);
    Int lo = std::min(Int(0), target[torsion + i]) - mx * bound;
    Int hi = std::max(Int(0), target[torsion + i]) + mx * bound;
    window[0][torsion + i] = lo;
    window[1][torsion + i] = hi;
  }
  auto s = detail::cone_bfs(kd, target, state_cap, &window);
  if (s.witness) {
    res.answer = ConeAnswer::Yes;
    res.witness = *s.witness;
    return res;
  }

  if (rank == 1 && !s.capped) {
    // Uniform-sign rank 1 is complete: every partial sum of a witness
    // stays inside [0, t] (resp. [t, 0]), which the window covers, so an
    // exhausted search is a proof of absence.
    bool all_nonneg = true, all_nonpos = true;
    for (const Int& a : gen_values[0]) {
      if (a < 0) all_nonneg = false;
      if (a > 0) all_nonpos = false;
    }
    const Int& t = target[torsion];
    if ((all_nonneg && t >= 0) || (all_nonpos && t <= 0)) {
      res.answer = ConeAnswer::No;
      return res;
    }
  }
  res.answer = ConeAnswer::Unknown;
  return res;
}

/// Order unit test: c (over W) is an order unit iff its support generates
/// all of W.
inline bool is_order_unit(const Graph& g, VSet w, const std::vector<Int>& c) {
  std::vector<int> wv = vset_vertices(w);
  check_internal(int(c.size()) == int(wv.size()),
                 "order unit coordinate length mismatch");
  VSet supp = 0;
  for (int j = 0; j < int(wv.size()); ++j) {
    require(c[j] >= 0, ErrorKind::NotSupportedInW,
            "order unit test needs nonnegative coefficients");
    if (c[j] != 0) supp |= vset_single(wv[j]);
  }
  return hs_closure(g, supp) == w;
}

/// Six-term data of the subquotient at H inside H2. The exponential map
/// vanishes for these algebras, so K0(sub) = coker(i0) and K1(sub) sits in
/// an extension 0 -> coker(i1) -> K1(sub) -> ker(i0) -> 0, reported by its
/// two constituents and the resulting rank.
struct SubquotientK {
  GroupHom i0, i1;
  FGAbelianGroup k0_sub;      // coker(i0)
  FGAbelianGroup coker_i1;
  SubgroupPresentation ker_i0;
  int k1_rank = 0;
};

inline SubquotientK subquotient_k(const Graph& g, const KData& h_data,
                                  const KData& h2_data) {
  require(IdealLattice::leq(h_data.w, h2_data.w), ErrorKind::NotNested,
          "subquotient_k requires nested sets");
  SubquotientK out;
  auto maps = induced_k_maps(g, h_data, h2_data);
  out.i0 = maps.first;
  out.i1 = maps.second;
  out.k0_sub = cokernel(out.i0);
  out.coker_i1 = cokernel(out.i1);
  out.ker_i0 = kernel(out.i0);
  out.k1_rank = out.coker_i1.free_rank() + out.ker_i0.group.free_rank();
  return out;
}

}  // namespace gca
