#ifndef CZITER_MATRIX_HPP
#define CZITER_MATRIX_HPP

#include <initializer_list>
#include <vector>

#include "cziter/errors.hpp"
#include "cziter/rational.hpp"

namespace cziter {

// dense matrix over an exact field (Rat, quadratic extensions, ...)
template <class F>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, F(0)) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  F& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  const F& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  Mat operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw dimension_error("matrix product shape mismatch");
    Mat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const F& v = (*this)(i, k);
        if (v == F(0)) continue;
        for (int j = 0; j < o.cols_; ++j) r(i, j) += v * o(k, j);
      }
    return r;
  }

  Mat operator+(const Mat& o) const {
    Mat r(*this);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
  }

  Mat operator-(const Mat& o) const {
    Mat r(*this);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
    return r;
  }

  Mat operator*(const F& s) const {
    Mat r(*this);
    for (auto& v : r.a_) v *= s;
    return r;
  }

  Mat transpose() const {
    Mat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  F trace() const {
    F t(0);
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  // row-echelon rank; destructive on a copy
  int rank() const {
    Mat m(*this);
    int r = 0;
    for (int col = 0; col < cols_ && r < rows_; ++col) {
      int piv = -1;
      for (int i = r; i < rows_; ++i)
        if (!(m(i, col) == F(0))) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      m.swap_rows(piv, r);
      F inv = F(1) / m(r, col);
      for (int j = col; j < cols_; ++j) m(r, j) *= inv;
      for (int i = 0; i < rows_; ++i) {
        if (i == r) continue;
        F f = m(i, col);
        if (f == F(0)) continue;
        for (int j = col; j < cols_; ++j) m(i, j) -= f * m(r, j);
      }
      ++r;
    }
    return r;
  }

  // basis of the right kernel, as columns
  std::vector<std::vector<F>> kernel_basis() const {
    Mat m(*this);
    std::vector<int> pivot_col;
    int r = 0;
    for (int col = 0; col < cols_ && r < rows_; ++col) {
      int piv = -1;
      for (int i = r; i < rows_; ++i)
        if (!(m(i, col) == F(0))) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      m.swap_rows(piv, r);
      F inv = F(1) / m(r, col);
      for (int j = col; j < cols_; ++j) m(r, j) *= inv;
      for (int i = 0; i < rows_; ++i) {
        if (i == r) continue;
        F f = m(i, col);
        if (f == F(0)) continue;
        for (int j = col; j < cols_; ++j) m(i, j) -= f * m(r, j);
      }
      pivot_col.push_back(col);
      ++r;
    }
    std::vector<bool> is_pivot(cols_, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<F>> basis;
    for (int free = 0; free < cols_; ++free) {
      if (is_pivot[free]) continue;
      std::vector<F> v(cols_, F(0));
      v[free] = F(1);
      for (int i = 0; i < int(pivot_col.size()); ++i) v[pivot_col[i]] = -m(i, free);
      basis.push_back(std::move(v));
    }
    return basis;
  }

  F det() const {
    if (rows_ != cols_) throw dimension_error("det of non-square matrix");
    Mat m(*this);
    F d(1);
    for (int col = 0; col < cols_; ++col) {
      int piv = -1;
      for (int i = col; i < rows_; ++i)
        if (!(m(i, col) == F(0))) {
          piv = i;
          break;
        }
      if (piv < 0) return F(0);
      if (piv != col) {
        m.swap_rows(piv, col);
        d = -d;
      }
      d *= m(col, col);
      F inv = F(1) / m(col, col);
      for (int i = col + 1; i < rows_; ++i) {
        F f = m(i, col) * inv;
        if (f == F(0)) continue;
        for (int j = col; j < cols_; ++j) m(i, j) -= f * m(col, j);
      }
    }
    return d;
  }

  // solve A x = b if consistent
  std::optional<std::vector<F>> solve(const std::vector<F>& b) const {
    Mat m(rows_, cols_ + 1);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
      m(i, cols_) = b[i];
    }
    std::vector<int> pivot_col;
    int r = 0;
    for (int col = 0; col < cols_ && r < rows_; ++col) {
      int piv = -1;
      for (int i = r; i < rows_; ++i)
        if (!(m(i, col) == F(0))) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      m.swap_rows(piv, r);
      F inv = F(1) / m(r, col);
      for (int j = col; j <= cols_; ++j) m(r, j) *= inv;
      for (int i = 0; i < rows_; ++i) {
        if (i == r) continue;
        F f = m(i, col);
        if (f == F(0)) continue;
        for (int j = col; j <= cols_; ++j) m(i, j) -= f * m(r, j);
      }
      pivot_col.push_back(col);
      ++r;
    }
    for (int i = r; i < rows_; ++i)
      if (!(m(i, cols_) == F(0))) return std::nullopt;
    std::vector<F> x(cols_, F(0));
    for (int i = 0; i < int(pivot_col.size()); ++i) x[pivot_col[i]] = m(i, cols_);
    return x;
  }

 private:
  void swap_rows(int i, int k) {
    if (i == k) return;
    for (int j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
  }

  int rows_, cols_;
  std::vector<F> a_;
};

using RatMat = Mat<Rat>;

// standard symplectic form, n x n identity blocks off the diagonal:
//   J = [ 0  I ]
//       [-I  0 ]
inline RatMat standard_J(int half_dim) {
  RatMat j(2 * half_dim, 2 * half_dim);
  for (int i = 0; i < half_dim; ++i) {
    j(i, half_dim + i) = 1;
    j(half_dim + i, i) = -1;
  }
  return j;
}

inline bool is_symplectic_mat(const RatMat& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() < 2) return false;
  RatMat j = standard_J(m.rows() / 2);
  return m.transpose() * j * m == j;
}

// rational matrix checked to satisfy M^T J M = J exactly on construction
class SymplecticMatrix {
 public:
  explicit SymplecticMatrix(RatMat m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() % 2 != 0 || m_.rows() < 2)
      throw dimension_error("symplectic matrix must be square of even dim >= 2");
    if (!is_symplectic_mat(m_)) throw invariant_error("matrix is not symplectic");
  }

  struct trusted_t {};
  // for products/assemblies of already-checked matrices
  SymplecticMatrix(RatMat m, trusted_t) : m_(std::move(m)) {}

  static SymplecticMatrix identity(int half_dim) {
    return SymplecticMatrix(RatMat::identity(2 * half_dim), trusted_t{});
  }

  int dim() const { return m_.rows(); }
  int half_dim() const { return m_.rows() / 2; }
  const RatMat& mat() const { return m_; }
  const Rat& operator()(int i, int j) const { return m_(i, j); }

  SymplecticMatrix operator*(const SymplecticMatrix& o) const {
    if (dim() != o.dim()) throw dimension_error("dimension mismatch in product");
    return SymplecticMatrix(m_ * o.m_, trusted_t{});
  }

  SymplecticMatrix inverse() const {
    // M^{-1} = J^{-1} M^T J = -J M^T J
    RatMat j = standard_J(half_dim());
    RatMat inv = (j * m_.transpose() * j) * Rat(-1);
    return SymplecticMatrix(std::move(inv), trusted_t{});
  }

  SymplecticMatrix pow(long k) const {
    if (k < 0) return inverse().pow(-k);
    SymplecticMatrix acc = identity(half_dim());
    SymplecticMatrix base = *this;
    while (k > 0) {
      if (k & 1) acc = acc * base;
      base = base * base;
      k >>= 1;
    }
    return acc;
  }

  bool operator==(const SymplecticMatrix& o) const { return m_ == o.m_; }

 private:
  RatMat m_;
};

// direct sum in symplectic (x, y) block coordinates: with A = [A1 B1; C1 D1]
// and B = [A2 B2; C2 D2], the result is
//   [A1 0 B1 0; 0 A2 0 B2; C1 0 D1 0; 0 C2 0 D2]
inline SymplecticMatrix diamond(const SymplecticMatrix& a, const SymplecticMatrix& b) {
  int p = a.half_dim(), q = b.half_dim(), n = p + q;
  RatMat r(2 * n, 2 * n);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      r(i, j) = a(i, j);
      r(i, n + j) = a(i, p + j);
      r(n + i, j) = a(p + i, j);
      r(n + i, n + j) = a(p + i, p + j);
    }
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      r(p + i, p + j) = b(i, j);
      r(p + i, n + p + j) = b(i, q + j);
      r(n + p + i, p + j) = b(q + i, j);
      r(n + p + i, n + p + j) = b(q + i, q + j);
    }
  return SymplecticMatrix(std::move(r), SymplecticMatrix::trusted_t{});
}

template <class... Rest>
SymplecticMatrix diamond(const SymplecticMatrix& a, const SymplecticMatrix& b,
                         const Rest&... rest) {
  if constexpr (sizeof...(rest) == 0)
    return diamond(a, b);
  else
    return diamond(diamond(a, b), rest...);
}

}  // namespace cziter

#endif
