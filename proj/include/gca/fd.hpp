#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "gca/common.hpp"
#include "gca/graph.hpp"

namespace gca {

using Cplx = std::complex<double>;

/// Small dense complex matrix, just enough for the correspondence checks.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    data_.assign(std::size_t(rows) * std::size_t(cols), Cplx(0, 0));
  }

  static CMatrix identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Cplx& operator()(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
  const Cplx& operator()(int r, int c) const {
    return data_[std::size_t(r) * cols_ + c];
  }

  CMatrix operator*(const CMatrix& o) const {
    check_internal(cols_ == o.rows_, "complex product shape mismatch");
    CMatrix out(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        Cplx a = (*this)(i, k);
        if (a == Cplx(0, 0)) continue;
        for (int j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
      }
    return out;
  }

  CMatrix adjoint() const {
    CMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  /// Frobenius norm, an upper bound for the operator norm.
  double norm() const {
    double s = 0;
    for (const Cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  double distance_to_identity() const {
    check_internal(rows_ == cols_, "identity distance needs a square matrix");
    CMatrix d = *this;
    for (int i = 0; i < rows_; ++i) d(i, i) -= 1.0;
    return d.norm();
  }

  /// Column block [c0, c0+width).
  CMatrix columns(int c0, int width) const {
    CMatrix out(rows_, width);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < width; ++j) out(i, j) = (*this)(i, c0 + j);
    return out;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Cplx> data_;
};

inline double distance(const CMatrix& a, const CMatrix& b) {
  check_internal(a.rows() == b.rows() && a.cols() == b.cols(),
                 "distance shape mismatch");
  double s = 0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - b(i, j));
  return std::sqrt(s);
}

inline constexpr double kUnitarityTol = 1e-12;
inline constexpr double kAlignTol = 1e-10;

/// Target B = direct sum of matrix blocks M_{n_i}; projections in M_inf(B)
/// are classified by rank vectors in N^k.
struct FDTarget {
  std::vector<int> block_sizes;

  void validate() const {
    for (int n : block_sizes)
      require(n >= 1, ErrorKind::Parse, "block sizes must be positive");
  }
};

using RankVector = std::vector<long long>;

/// A proper correspondence into the target at matrix scale: a rank vector
/// per vertex and, per regular vertex and block, a unitary from the edge
/// direct sum (edges of E^v in lexicographic id order) onto the vertex
/// module.
struct CorrespondenceFamily {
  FDTarget target;
  std::vector<RankVector> dims;                 // indexed by vertex
  std::vector<std::vector<CMatrix>> unitaries;  // [vertex][block], regular only
  unsigned long long seed = 0;                  // 0 = deterministic identity

  bool same_dims(const CorrespondenceFamily& o) const {
    return target.block_sizes == o.target.block_sizes && dims == o.dims;
  }
};

/// Edges of E^v sorted by edge identifier.
inline std::vector<int> ordered_incoming(const Graph& g, int v) {
  std::vector<int> edges = g.incoming(v);
  std::sort(edges.begin(), edges.end(), [&](int a, int b) {
    return g.edge_id(a) < g.edge_id(b);
  });
  return edges;
}

namespace detail {

/// Haar-distributed unitary via Gram-Schmidt of a complex Gaussian matrix.
inline CMatrix haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Cplx(gauss(rng), gauss(rng));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      Cplx dot(0, 0);
      for (int i = 0; i < n; ++i) dot += std::conj(a(i, k)) * a(i, j);
      for (int i = 0; i < n; ++i) a(i, j) -= dot * a(i, k);
    }
    double nrm = 0;
    for (int i = 0; i < n; ++i) nrm += std::norm(a(i, j));
    nrm = std::sqrt(nrm);
    check_internal(nrm > 1e-9, "Gaussian matrix must be full rank");
    for (int i = 0; i < n; ++i) a(i, j) /= nrm;
  }
  return a;
}

}  // namespace detail

/// Builds the family for a rank-vector assignment satisfying the dimension
/// equation. seed = 0 gives identity unitaries; otherwise Haar-random ones
/// drawn from the recorded seed.
inline CorrespondenceFamily lift_monoid_hom_fd(
    const Graph& g, const FDTarget& target,
    const std::vector<RankVector>& dims, unsigned long long seed = 0) {
  target.validate();
  const int k = int(target.block_sizes.size());
  require(int(dims.size()) == g.vertex_count(),
          ErrorKind::DimensionEquationViolated,
          "one rank vector per vertex is required");
  for (int v = 0; v < g.vertex_count(); ++v) {
    require(int(dims[v].size()) == k, ErrorKind::DimensionEquationViolated,
            "rank vector length must match the block count");
    for (long long d : dims[v])
      require(d >= 0, ErrorKind::DimensionEquationViolated,
              "ranks must be nonnegative");
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!g.is_regular(v)) continue;
    for (int i = 0; i < k; ++i) {
      long long sum = 0;
      for (int e : g.incoming(v)) sum += dims[g.src(e)][i];
      require(dims[v][i] == sum, ErrorKind::DimensionEquationViolated,
              "dimension equation fails at vertex " + g.vertex_id(v) +
                  ", block " + std::to_string(i));
    }
  }

  CorrespondenceFamily f;
  f.target = target;
  f.dims = dims;
  f.seed = seed;
  f.unitaries.resize(g.vertex_count());
  std::mt19937_64 rng(seed);
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!g.is_regular(v)) continue;
    f.unitaries[v].reserve(k);
    for (int i = 0; i < k; ++i) {
      int n = int(dims[v][i]);
      f.unitaries[v].push_back(seed == 0 ? CMatrix::identity(n)
                                         : detail::haar_unitary(n, rng));
    }
  }
  return f;
}

/// Worst residual of the Cuntz-Krieger relations over all regular vertices
/// and blocks: per edge summand, T_e^* T_e against the source projection,
/// and the full sum T_e T_e^* against the vertex projection.
struct CkReport {
  double max_residual = 0.0;
  bool ok(double tol = kUnitarityTol) const { return max_residual <= tol; }
};

inline CkReport verify_ck(const CorrespondenceFamily& f, const Graph& g) {
  CkReport rep;
  const int k = int(f.target.block_sizes.size());
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!g.is_regular(v)) continue;
    std::vector<int> edges = ordered_incoming(g, v);
    for (int i = 0; i < k; ++i) {
      const CMatrix& u = f.unitaries[v][i];
      check_internal(u.rows() == int(f.dims[v][i]) && u.cols() == u.rows(),
                     "unitary size must match the vertex rank");
      // sum of T_e T_e^* = U U^*
      rep.max_residual = std::max(
          rep.max_residual, (u * u.adjoint()).distance_to_identity());
      int offset = 0;
      for (int e : edges) {
        int w = int(f.dims[g.src(e)][i]);
        CMatrix t = u.columns(offset, w);
        rep.max_residual =
            std::max(rep.max_residual,
                     (t.adjoint() * t).distance_to_identity());
        offset += w;
      }
      check_internal(offset == u.cols(),
                     "edge summands must exhaust the unitary");
    }
  }
  return rep;
}

/// The difference unitaries Upsilon_v = U'_v U_v^* between two families
/// with the same dimension data; reconstruction U'_v = Upsilon_v U_v is
/// verified to rounding.
inline std::vector<std::vector<CMatrix>> unitary_difference(
    const Graph& g, const CorrespondenceFamily& f1,
    const CorrespondenceFamily& f2) {
  require(f1.same_dims(f2), ErrorKind::DimsMismatch,
          "families must share target and dimension data");
  std::vector<std::vector<CMatrix>> out(g.vertex_count());
  const int k = int(f1.target.block_sizes.size());
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!g.is_regular(v)) continue;
    for (int i = 0; i < k; ++i) {
      CMatrix up = f2.unitaries[v][i] * f1.unitaries[v][i].adjoint();
      check_internal(
          distance(up * f1.unitaries[v][i], f2.unitaries[v][i]) <=
              kUnitarityTol,
          "difference unitary must reconstruct the second family");
      out[v].push_back(std::move(up));
    }
  }
  return out;
}

/// For an acyclic graph, unitaries W_v conjugating f2 so it agrees with f1
/// on the finite set F. Sources get the identity; regular vertices are
/// solved in topological order via W_v = U_v (direct sum of W_{s(e)})
/// (U'_v)^*, which makes the conjugated family match f1 everywhere.
inline std::vector<std::vector<CMatrix>> align_af(
    const Graph& g, const CorrespondenceFamily& f1,
    const CorrespondenceFamily& f2, VSet frontier) {
  require(simple_cycles_within(g, g.all_vertices(), 1).empty(),
          ErrorKind::HasCycle, "align_af requires an acyclic graph");
  require(f1.same_dims(f2), ErrorKind::DimsMismatch,
          "families must share target and dimension data");
  const int k = int(f1.target.block_sizes.size());

  // topological order: sources of incoming edges before their range
  std::vector<int> order;
  std::vector<char> placed(g.vertex_count(), 0);
  while (int(order.size()) < g.vertex_count()) {
    bool progress = false;
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (placed[v]) continue;
      bool ready = true;
      for (int e : g.incoming(v))
        if (!placed[g.src(e)]) ready = false;
      if (!ready) continue;
      placed[v] = 1;
      order.push_back(v);
      progress = true;
    }
    check_internal(progress, "acyclic graph must admit a topological order");
  }

  std::vector<std::vector<CMatrix>> w(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v)
    for (int i = 0; i < k; ++i)
      w[v].push_back(CMatrix::identity(int(f1.dims[v][i])));

  for (int v : order) {
    if (!g.is_regular(v)) continue;
    std::vector<int> edges = ordered_incoming(g, v);
    for (int i = 0; i < k; ++i) {
      int n = int(f1.dims[v][i]);
      CMatrix block(n, n);
      int offset = 0;
      for (int e : edges) {
        const CMatrix& ws = w[g.src(e)][i];
        for (int r = 0; r < ws.rows(); ++r)
          for (int c = 0; c < ws.cols(); ++c)
            block(offset + r, offset + c) = ws(r, c);
        offset += ws.rows();
      }
      w[v][i] = f1.unitaries[v][i] * block * f2.unitaries[v][i].adjoint();
    }
  }

  // postcondition on the frontier: conjugation reproduces f1 there
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!vset_contains(frontier, v) || !g.is_regular(v)) continue;
    std::vector<int> edges = ordered_incoming(g, v);
    for (int i = 0; i < k; ++i) {
      int n = int(f1.dims[v][i]);
      CMatrix block(n, n);
      int offset = 0;
      for (int e : edges) {
        const CMatrix& ws = w[g.src(e)][i];
        for (int r = 0; r < ws.rows(); ++r)
          for (int c = 0; c < ws.cols(); ++c)
            block(offset + r, offset + c) = ws(r, c);
        offset += ws.rows();
      }
      CMatrix conj = w[v][i] * f2.unitaries[v][i] * block.adjoint();
      check_internal(distance(conj, f1.unitaries[v][i]) <= kAlignTol,
                     "aligned family must match on the frontier");
    }
  }
  return w;
}

}  // namespace gca
