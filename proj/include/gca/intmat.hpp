#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gca/common.hpp"

namespace gca {

/// Dense matrix over arbitrary-precision integers, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    data_.assign(std::size_t(rows) * std::size_t(cols), Int(0));
  }

  static IntMatrix identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Int& operator()(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
  const Int& operator()(int r, int c) const {
    return data_[std::size_t(r) * cols_ + c];
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  bool is_zero() const {
    for (const Int& x : data_)
      if (x != 0) return false;
    return true;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    check_internal(cols_ == o.rows_, "matrix product shape mismatch");
    IntMatrix out(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Int& a = (*this)(i, k);
        if (a == 0) continue;
        for (int j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
      }
    return out;
  }

  IntMatrix operator-(const IntMatrix& o) const {
    check_internal(rows_ == o.rows_ && cols_ == o.cols_,
                   "matrix difference shape mismatch");
    IntMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
      out.data_[i] = data_[i] - o.data_[i];
    return out;
  }

  std::vector<Int> apply(const std::vector<Int>& x) const {
    check_internal(int(x.size()) == cols_, "matrix apply shape mismatch");
    std::vector<Int> out(rows_, Int(0));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if ((*this)(i, j) != 0) out[i] += (*this)(i, j) * x[j];
    return out;
  }

  IntMatrix column(int j) const {
    IntMatrix out(rows_, 1);
    for (int i = 0; i < rows_; ++i) out(i, 0) = (*this)(i, j);
    return out;
  }

  std::vector<Int> column_vec(int j) const {
    std::vector<Int> out(rows_);
    for (int i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  /// Horizontal concatenation [A | B].
  static IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b) {
    check_internal(a.rows() == b.rows(), "hconcat shape mismatch");
    IntMatrix out(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
      for (int j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
      for (int j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
    }
    return out;
  }

  static IntMatrix from_columns(int rows,
                                const std::vector<std::vector<Int>>& cols) {
    IntMatrix out(rows, int(cols.size()));
    for (int j = 0; j < int(cols.size()); ++j) {
      check_internal(int(cols[j].size()) == rows, "column length mismatch");
      for (int i = 0; i < rows; ++i) out(i, j) = cols[j][i];
    }
    return out;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Int> data_;
};

struct SmithForm {
  IntMatrix u;  // unimodular, rows x rows
  IntMatrix d;  // diagonal with divisibility chain
  IntMatrix v;  // unimodular, cols x cols
  int rank = 0;

  Int diag(int i) const {
    if (i < d.rows() && i < d.cols()) return d(i, i);
    return 0;
  }
};

/// Smith normal form U*A*V = D over Z. Pivot choice: nonzero entry of
/// least absolute value, ties broken by (row, col); exact arithmetic keeps
/// this correct, the pivot rule merely bounds entry growth.
inline SmithForm smith_normal_form(const IntMatrix& a) {
  SmithForm s;
  s.d = a;
  s.u = IntMatrix::identity(a.rows());
  s.v = IntMatrix::identity(a.cols());
  IntMatrix& d = s.d;
  const int n = std::min(a.rows(), a.cols());

  auto swap_rows = [&](int i, int j) {
    if (i == j) return;
    for (int c = 0; c < d.cols(); ++c) std::swap(d(i, c), d(j, c));
    for (int c = 0; c < s.u.cols(); ++c) std::swap(s.u(i, c), s.u(j, c));
  };
  auto swap_cols = [&](int i, int j) {
    if (i == j) return;
    for (int r = 0; r < d.rows(); ++r) std::swap(d(r, i), d(r, j));
    for (int r = 0; r < s.v.rows(); ++r) std::swap(s.v(r, i), s.v(r, j));
  };
  auto add_row = [&](int dst, int src, const Int& f) {  // row dst += f*src
    for (int c = 0; c < d.cols(); ++c) d(dst, c) += f * d(src, c);
    for (int c = 0; c < s.u.cols(); ++c) s.u(dst, c) += f * s.u(src, c);
  };
  auto add_col = [&](int dst, int src, const Int& f) {
    for (int r = 0; r < d.rows(); ++r) d(r, dst) += f * d(r, src);
    for (int r = 0; r < s.v.rows(); ++r) s.v(r, dst) += f * s.v(r, src);
  };
  auto negate_row = [&](int i) {
    for (int c = 0; c < d.cols(); ++c) d(i, c) = -d(i, c);
    for (int c = 0; c < s.u.cols(); ++c) s.u(i, c) = -s.u(i, c);
  };

  int k = 0;
  while (k < n) {
    // Least-|entry| pivot in the trailing block.
    int pr = -1, pc = -1;
    for (int i = k; i < d.rows(); ++i)
      for (int j = k; j < d.cols(); ++j)
        if (d(i, j) != 0 &&
            (pr < 0 || abs(d(i, j)) < abs(d(pr, pc))))
          pr = i, pc = j;
    if (pr < 0) break;
    swap_rows(k, pr);
    swap_cols(k, pc);

    bool clean = true;
    for (int i = k + 1; i < d.rows(); ++i)
      if (d(i, k) != 0) {
        Int q = d(i, k) / d(k, k);
        add_row(i, k, -q);
        if (d(i, k) != 0) clean = false;
      }
    for (int j = k + 1; j < d.cols(); ++j)
      if (d(k, j) != 0) {
        Int q = d(k, j) / d(k, k);
        add_col(j, k, -q);
        if (d(k, j) != 0) clean = false;
      }
    if (!clean) continue;  // smaller remainder appeared, re-pivot

    // Divisibility: fold in any trailing entry not divisible by d(k,k).
    bool redo = false;
    for (int i = k + 1; i < d.rows() && !redo; ++i)
      for (int j = k + 1; j < d.cols() && !redo; ++j)
        if (d(i, j) % d(k, k) != 0) {
          add_row(k, i, 1);
          redo = true;
        }
    if (redo) continue;

    if (d(k, k) < 0) negate_row(k);
    ++k;
  }
  s.rank = k;
  return s;
}

/// Column-style Hermite normal form A*U = H with U unimodular; H has
/// column echelon shape with positive pivots and entries right of a pivot
/// reduced into [0, pivot). Used to canonicalise lattice bases.
inline IntMatrix hermite_columns(const IntMatrix& a) {
  IntMatrix h = a;
  int pivot_row = 0, pivot_col = 0;
  auto add_col = [&](int dst, int src, const Int& f) {
    for (int r = 0; r < h.rows(); ++r) h(r, dst) += f * h(r, src);
  };
  while (pivot_row < h.rows() && pivot_col < h.cols()) {
    // Gcd-reduce the entries of this row across columns >= pivot_col.
    while (true) {
      int best = -1;
      for (int j = pivot_col; j < h.cols(); ++j)
        if (h(pivot_row, j) != 0 &&
            (best < 0 || abs(h(pivot_row, j)) < abs(h(pivot_row, best))))
          best = j;
      if (best < 0) break;
      if (best != pivot_col)
        for (int r = 0; r < h.rows(); ++r)
          std::swap(h(r, pivot_col), h(r, best));
      bool done = true;
      for (int j = pivot_col + 1; j < h.cols(); ++j)
        if (h(pivot_row, j) != 0) {
          Int q = h(pivot_row, j) / h(pivot_row, pivot_col);
          add_col(j, pivot_col, -q);
          if (h(pivot_row, j) != 0) done = false;
        }
      if (done) break;
    }
    if (h(pivot_row, pivot_col) == 0) {
      ++pivot_row;
      continue;
    }
    if (h(pivot_row, pivot_col) < 0)
      for (int r = 0; r < h.rows(); ++r)
        h(r, pivot_col) = -h(r, pivot_col);
    for (int j = 0; j < pivot_col; ++j) {
      // floor division reduce
      Int q = h(pivot_row, j) / h(pivot_row, pivot_col);
      if (h(pivot_row, j) - q * h(pivot_row, pivot_col) < 0) q -= 1;
      add_col(j, pivot_col, -q);
    }
    ++pivot_row;
    ++pivot_col;
  }
  return h;
}

/// Integer solution x of A x = b, if one exists.
inline std::optional<std::vector<Int>> solve_integer(const IntMatrix& a,
                                                     const std::vector<Int>& b) {
  SmithForm s = smith_normal_form(a);
  std::vector<Int> c = s.u.apply(b);
  std::vector<Int> y(a.cols(), Int(0));
  for (int i = 0; i < a.rows(); ++i) {
    Int di = s.diag(i);
    if (di == 0) {
      if (c[i] != 0) return std::nullopt;
    } else {
      if (c[i] % di != 0) return std::nullopt;
      if (i < a.cols()) y[i] = c[i] / di;
    }
  }
  return s.v.apply(y);
}

/// Basis of the integer kernel of A, canonicalised by Hermite form.
inline IntMatrix kernel_basis(const IntMatrix& a) {
  SmithForm s = smith_normal_form(a);
  std::vector<std::vector<Int>> cols;
  for (int j = s.rank; j < a.cols(); ++j) cols.push_back(s.v.column_vec(j));
  IntMatrix k = IntMatrix::from_columns(a.cols(), cols);
  return hermite_columns(k);
}

/// |det| of a square unimodular-candidate matrix via SNF diagonal.
inline Int abs_det(const IntMatrix& a) {
  check_internal(a.rows() == a.cols(), "abs_det needs a square matrix");
  SmithForm s = smith_normal_form(a);
  Int p = 1;
  for (int i = 0; i < a.rows(); ++i) p *= s.diag(i);
  return abs(p);
}

}  // namespace gca
