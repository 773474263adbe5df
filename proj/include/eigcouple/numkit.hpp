#pragma once

// Dense complex linear algebra for small matrices (m up to a few dozen):
// Schur/eigen decomposition, one-sided Jacobi SVD, rank and kernel
// decisions, minimum-norm singular solves.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "eigcouple/errors.hpp"

namespace eigcouple {

using Complex = std::complex<double>;

inline constexpr double kDefaultRankTol = 1e-8;

class CVector {
 public:
  CVector() = default;
  explicit CVector(std::size_t n, Complex fill = {}) : data_(n, fill) {}
  CVector(std::initializer_list<Complex> values) : data_(values) {}
  explicit CVector(std::vector<Complex> values) : data_(std::move(values)) {}

  static CVector unit(std::size_t n, std::size_t k);

  std::size_t size() const noexcept { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<const Complex> view() const noexcept { return data_; }
  const std::vector<Complex>& values() const noexcept { return data_; }

  double norm() const;
  double max_abs() const;

  CVector& operator+=(const CVector& other);
  CVector& operator-=(const CVector& other);
  CVector& operator*=(Complex s);

  friend bool operator==(const CVector&, const CVector&) = default;

 private:
  std::vector<Complex> data_;
};

CVector operator+(CVector a, const CVector& b);
CVector operator-(CVector a, const CVector& b);
CVector operator*(Complex s, CVector v);
CVector operator*(CVector v, Complex s);
CVector conj(const CVector& v);

/// Row-major dense complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t n) { return CMatrix(n, n); }
  /// Matrix whose columns are the given vectors.
  static CMatrix from_columns(std::span<const CVector> columns);
  static CMatrix outer(const CVector& u, const CVector& v);  // u v^*

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  CVector column(std::size_t j) const;
  void set_column(std::size_t j, const CVector& v);
  CVector row(std::size_t i) const;

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conjugate() const;

  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex s);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(Complex s, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CVector operator*(const CMatrix& a, const CVector& x);
CMatrix shifted(const CMatrix& a, Complex shift);  // a - shift*I

/// (u, v) = sum_i u_i conj(v_i); linear in u, antilinear in v.
Complex hermitian_inner(const CVector& u, const CVector& v);

/// Scale so the largest-magnitude entry is real positive; ties go to the lowest index.
CVector gauge_fixed(const CVector& v);

struct SchurForm {
  CMatrix T;  // upper triangular
  CMatrix Z;  // unitary, A = Z T Z^*
};

class NumericError : public Error {
 public:
  NumericError(const std::string& what, SchurForm partial) : Error(what), partial_(std::move(partial)) {}
  const SchurForm& partial() const noexcept { return partial_; }

 private:
  SchurForm partial_;
};

/// Householder Hessenberg reduction followed by Wilkinson-shifted QR.
/// Throws NumericError after 100*m sweeps without convergence.
SchurForm schur(const CMatrix& a);

struct EigenPair {
  Complex value;
  CVector vector;  // unit norm, gauge fixed
};

struct EigenSet {
  std::vector<EigenPair> pairs;
  std::vector<Complex> values() const;
};

/// All eigenvalues with multiplicity, ordered by (real, imag); right vectors by inverse iteration.
EigenSet eig_all(const CMatrix& a);
std::vector<Complex> eigenvalues(const CMatrix& a);

struct Svd {
  std::vector<double> sigma;  // descending
  CMatrix U;                  // m x k left vectors; columns with sigma == 0 are zero
  CMatrix V;                  // k x k right vectors (columns)
};

/// One-sided Jacobi SVD of an m x k matrix (m >= k not required).
Svd svd(const CMatrix& a);
std::vector<double> singular_values(const CMatrix& a);

int rank_at(const CMatrix& m, double tol_rank = kDefaultRankTol);

/// Unit kernel vector of a corank-1 matrix, gauge fixed.
CVector null_vector(const CMatrix& m, double tol_rank = kDefaultRankTol);

/// Orthonormal basis (columns) of the `dim` right singular directions with the
/// smallest singular values. No rank decision is made.
CMatrix trailing_right_singular_basis(const CMatrix& m, std::size_t dim);

/// Minimum-norm x with m x = b. Throws ConsistencyError if b has a component
/// outside the range of m larger than the residual bound.
CVector solve_on_complement(const CMatrix& m, const CVector& b,
                            double tol_rank = kDefaultRankTol);

/// LU with partial pivoting. Throws NumericError on an exactly singular pivot.
CVector solve(const CMatrix& a, const CVector& b);
CMatrix inverse(const CMatrix& a);

double condition_number(const CMatrix& a);

/// Principal square root computed without cancellation in either component.
Complex stable_sqrt(double re, double im);

}  // namespace eigcouple
