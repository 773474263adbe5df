#include "eigcouple/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace eigcouple {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double abs1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

void require_square(const CMatrix& a, const char* where) {
  if (!a.is_square()) throw DimensionError(std::string(where) + ": matrix must be square");
}

// Rotation [c s; -conj(s) c] with c real that maps (a, b) to (r, 0).
struct Givens {
  double c;
  Complex s;
};

Givens make_givens(Complex a, Complex b) {
  if (b == Complex{}) return {1.0, Complex{}};
  const double abs_a = std::abs(a);
  if (abs_a == 0.0) return {0.0, std::conj(b) / std::abs(b)};
  const double norm = std::hypot(abs_a, std::abs(b));
  return {abs_a / norm, (a / abs_a) * std::conj(b) / norm};
}

void hessenberg_reduce(CMatrix& h, CMatrix& z) {
  const std::size_t n = h.rows();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(h(i, k));
    if (tail == 0.0) continue;
    const Complex x0 = h(k + 1, k);
    const double xnorm = std::sqrt(tail + std::norm(x0));
    const Complex phase = (x0 == Complex{}) ? Complex{1.0} : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;

    std::vector<Complex> v(n - k - 1);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = h(k + 1 + i, k);
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (const auto& e : v) vnorm2 += std::norm(e);
    const double scale = 2.0 / vnorm2;

    for (std::size_t j = k; j < n; ++j) {
      Complex s{};
      for (std::size_t i = 0; i < v.size(); ++i) s += std::conj(v[i]) * h(k + 1 + i, j);
      s *= scale;
      for (std::size_t i = 0; i < v.size(); ++i) h(k + 1 + i, j) -= v[i] * s;
    }
    auto apply_right = [&](CMatrix& m) {
      for (std::size_t i = 0; i < m.rows(); ++i) {
        Complex s{};
        for (std::size_t j = 0; j < v.size(); ++j) s += m(i, k + 1 + j) * v[j];
        s *= scale;
        for (std::size_t j = 0; j < v.size(); ++j) m(i, k + 1 + j) -= s * std::conj(v[j]);
      }
    };
    apply_right(h);
    apply_right(z);
    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = Complex{};
  }
}

Complex wilkinson_shift(const CMatrix& t, std::size_t hi) {
  const Complex a = t(hi - 1, hi - 1);
  const Complex b = t(hi - 1, hi);
  const Complex c = t(hi, hi - 1);
  const Complex d = t(hi, hi);
  const Complex p = 0.5 * (a - d);
  const Complex disc = std::sqrt(p * p + b * c);
  const Complex den = (std::abs(p + disc) >= std::abs(p - disc)) ? p + disc : p - disc;
  if (den == Complex{}) return d;
  return d - b * c / den;
}

struct LuFactors {
  CMatrix lu;
  std::vector<std::size_t> perm;
};

// Partial pivoting; pivots smaller than `floor` are replaced by `floor` (keeping phase)
// when floor > 0, otherwise a zero pivot throws.
LuFactors lu_factor(CMatrix a, double floor) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
    }
    if (std::abs(a(k, k)) <= floor || a(k, k) == Complex{}) {
      if (floor <= 0.0) throw NumericError("solve: singular matrix", {});
      const Complex p = a(k, k);
      a(k, k) = (p == Complex{}) ? Complex{floor} : floor * p / std::abs(p);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = a(i, k) / a(k, k);
      a(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return {std::move(a), std::move(perm)};
}

CVector lu_solve(const LuFactors& f, const CVector& b) {
  const std::size_t n = b.size();
  CVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
    x[i] /= f.lu(i, i);
  }
  return x;
}

double residual_norm(const CMatrix& a, Complex lambda, const CVector& x) {
  return (a * x - lambda * x).norm();
}

CVector inverse_iteration(const CMatrix& a, Complex lambda, const CVector& start,
                          std::span<const CVector> against) {
  const std::size_t n = a.rows();
  const double anorm = std::max(a.frobenius_norm(), 1.0);
  const LuFactors f = lu_factor(shifted(a, lambda), kEps * anorm);
  CVector x = start;
  for (int it = 0; it < 4; ++it) {
    x = lu_solve(f, x);
    for (const auto& q : against) x -= hermitian_inner(x, q) * q;
    const double nx = x.norm();
    if (!(nx > 0.0) || !std::isfinite(nx)) return CVector(n);
    x *= 1.0 / nx;
  }
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// CVector

CVector CVector::unit(std::size_t n, std::size_t k) {
  CVector v(n);
  v[k] = 1.0;
  return v;
}

double CVector::norm() const {
  double scale = 0.0;
  for (const auto& e : data_) scale = std::max(scale, std::abs(e));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& e : data_) s += std::norm(e / scale);
  return scale * std::sqrt(s);
}

double CVector::max_abs() const {
  double m = 0.0;
  for (const auto& e : data_) m = std::max(m, std::abs(e));
  return m;
}

CVector& CVector::operator+=(const CVector& other) {
  if (other.size() != size()) throw DimensionError("vector length mismatch");
  for (std::size_t i = 0; i < size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CVector& CVector::operator-=(const CVector& other) {
  if (other.size() != size()) throw DimensionError("vector length mismatch");
  for (std::size_t i = 0; i < size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

CVector& CVector::operator*=(Complex s) {
  for (auto& e : data_) e *= s;
  return *this;
}

CVector operator+(CVector a, const CVector& b) { return a += b; }
CVector operator-(CVector a, const CVector& b) { return a -= b; }
CVector operator*(Complex s, CVector v) { return v *= s; }
CVector operator*(CVector v, Complex s) { return v *= s; }

CVector conj(const CVector& v) {
  CVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::conj(v[i]);
  return out;
}

Complex hermitian_inner(const CVector& u, const CVector& v) {
  if (u.size() != v.size()) throw DimensionError("hermitian_inner: length mismatch");
  Complex s{};
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * std::conj(v[i]);
  return s;
}

CVector gauge_fixed(const CVector& v) {
  if (v.size() == 0) return v;
  std::size_t best = 0;
  double best_abs = std::abs(v[0]);
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best_abs * (1.0 + 1e-12)) {
      best = i;
      best_abs = a;
    }
  }
  if (best_abs == 0.0) return v;
  CVector out = (std::abs(v[best]) / v[best]) * v;
  out[best] = std::abs(out[best]);
  return out;
}

// ---------------------------------------------------------------------------
// CMatrix

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("CMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::from_columns(std::span<const CVector> columns) {
  if (columns.empty()) return {};
  CMatrix m(columns[0].size(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
  return m;
}

CMatrix CMatrix::outer(const CVector& u, const CVector& v) {
  CMatrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
  return m;
}

CVector CMatrix::column(std::size_t j) const {
  CVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void CMatrix::set_column(std::size_t j, const CVector& v) {
  if (v.size() != rows_) throw DimensionError("set_column: length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

CVector CMatrix::row(std::size_t i) const {
  CVector v(cols_);
  for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
  return v;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

CMatrix CMatrix::transpose() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

CMatrix CMatrix::conjugate() const {
  CMatrix m = *this;
  for (auto& e : m.data_) e = std::conj(e);
  return m;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& e : data_) s += std::norm(e);
  return std::sqrt(s);
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& e : data_) m = std::max(m, std::abs(e));
  return m;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_) throw DimensionError("matrix shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_) throw DimensionError("matrix shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& e : data_) e *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(Complex s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

CVector operator*(const CMatrix& a, const CVector& x) {
  if (a.cols() != x.size()) throw DimensionError("matrix-vector shape mismatch");
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s{};
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

CMatrix shifted(const CMatrix& a, Complex shift) {
  require_square(a, "shifted");
  CMatrix m = a;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= shift;
  return m;
}

// ---------------------------------------------------------------------------
// Schur / eigen

SchurForm schur(const CMatrix& a) {
  require_square(a, "schur");
  if (!a.all_finite()) throw DomainError("schur: non-finite matrix entries");
  const std::size_t n = a.rows();
  CMatrix t = a;
  CMatrix z = CMatrix::identity(n);
  if (n <= 1) return {t, z};
  hessenberg_reduce(t, z);

  const double anorm = std::max(t.frobenius_norm(), std::numeric_limits<double>::min());
  const std::size_t cap = 100 * n;
  std::size_t sweeps = 0;
  std::size_t hi = n - 1;
  int its = 0;
  while (hi > 0) {
    std::size_t l = hi;
    while (l > 0) {
      double s = abs1(t(l - 1, l - 1)) + abs1(t(l, l));
      if (s == 0.0) s = anorm;
      if (abs1(t(l, l - 1)) <= kEps * s) {
        t(l, l - 1) = Complex{};
        break;
      }
      --l;
    }
    if (l == hi) {
      --hi;
      its = 0;
      continue;
    }
    if (sweeps >= cap) {
      throw NumericError("schur: QR iteration did not converge within " + std::to_string(cap) +
                             " sweeps",
                         {t, z});
    }
    ++sweeps;
    ++its;

    Complex mu;
    if (its % 10 == 0) {
      mu = t(hi, hi) + 0.75 * std::abs(t(hi, hi - 1));
    } else {
      mu = wilkinson_shift(t, hi);
    }

    for (std::size_t i = l; i <= hi; ++i) t(i, i) -= mu;
    std::vector<Givens> rot(hi - l);
    for (std::size_t k = l; k < hi; ++k) {
      const Givens g = make_givens(t(k, k), t(k + 1, k));
      rot[k - l] = g;
      for (std::size_t j = k; j < n; ++j) {
        const Complex x = t(k, j);
        const Complex y = t(k + 1, j);
        t(k, j) = g.c * x + g.s * y;
        t(k + 1, j) = -std::conj(g.s) * x + g.c * y;
      }
      t(k + 1, k) = Complex{};
    }
    for (std::size_t k = l; k < hi; ++k) {
      const Givens& g = rot[k - l];
      auto apply_cols = [&](CMatrix& m, std::size_t row_end) {
        for (std::size_t i = 0; i < row_end; ++i) {
          const Complex x = m(i, k);
          const Complex y = m(i, k + 1);
          m(i, k) = g.c * x + std::conj(g.s) * y;
          m(i, k + 1) = -g.s * x + g.c * y;
        }
      };
      apply_cols(t, std::min(k + 2, hi + 1));
      apply_cols(z, n);
    }
    for (std::size_t i = l; i <= hi; ++i) t(i, i) += mu;
  }
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) t(i, j) = Complex{};
  return {t, z};
}

std::vector<Complex> EigenSet::values() const {
  std::vector<Complex> v;
  v.reserve(pairs.size());
  for (const auto& p : pairs) v.push_back(p.value);
  return v;
}

std::vector<Complex> eigenvalues(const CMatrix& a) {
  const SchurForm s = schur(a);
  std::vector<Complex> vals(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) vals[i] = s.T(i, i);
  std::sort(vals.begin(), vals.end(), [](Complex x, Complex y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });
  return vals;
}

EigenSet eig_all(const CMatrix& a) {
  const std::size_t n = a.rows();
  const std::vector<Complex> vals = eigenvalues(a);
  const double anorm = std::max(a.frobenius_norm(), 1.0);
  const double close = 10.0 * std::sqrt(kEps) * anorm;

  CVector start(n);
  for (std::size_t i = 0; i < n; ++i)
    start[i] = Complex(1.0 + 0.5 * static_cast<double>(i), 0.25 * static_cast<double>(i));
  start *= 1.0 / start.norm();

  EigenSet out;
  out.pairs.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<CVector> siblings;
    for (std::size_t j = 0; j < k; ++j)
      if (std::abs(vals[j] - vals[k]) <= close) siblings.push_back(out.pairs[j].vector);

    CVector plain = inverse_iteration(a, vals[k], start, {});
    double plain_res = residual_norm(a, vals[k], plain);
    for (std::size_t e = 0; e < n && !(plain_res <= 1e-10 * anorm); ++e) {
      CVector alt = inverse_iteration(a, vals[k], CVector::unit(n, e), {});
      const double r = residual_norm(a, vals[k], alt);
      if (r < plain_res || plain.norm() == 0.0) {
        plain = std::move(alt);
        plain_res = r;
      }
    }
    CVector chosen = plain;
    if (!siblings.empty()) {
      // Prefer a vector independent of earlier ones at the same eigenvalue when one exists.
      const CVector ortho = inverse_iteration(a, vals[k], start, siblings);
      if (ortho.norm() > 0.0 && residual_norm(a, vals[k], ortho) <= 1e3 * kEps * anorm * n)
        chosen = ortho;
    }
    out.pairs.push_back({vals[k], gauge_fixed(chosen)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVD and rank

Svd svd(const CMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  CMatrix w = a;
  CMatrix v = CMatrix::identity(k);

  auto col_norm2 = [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::norm(w(i, j));
    return s;
  };

  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const double alpha = col_norm2(i);
        const double beta = col_norm2(j);
        Complex gamma{};
        for (std::size_t r = 0; r < m; ++r) gamma += std::conj(w(r, i)) * w(r, j);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Complex phase_conj = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = 1.0 / (zeta + std::copysign(std::sqrt(1.0 + zeta * zeta), zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        auto rotate = [&](CMatrix& mat) {
          for (std::size_t r = 0; r < mat.rows(); ++r) {
            const Complex x = mat(r, i);
            const Complex y = phase_conj * mat(r, j);
            mat(r, i) = c * x - s * y;
            mat(r, j) = s * x + c * y;
          }
        };
        rotate(w);
        rotate(v);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(k);
  for (std::size_t j = 0; j < k; ++j) sigma[j] = std::sqrt(col_norm2(j));
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Svd out;
  out.sigma.resize(k);
  out.U = CMatrix(m, k);
  out.V = CMatrix(k, k);
  for (std::size_t jj = 0; jj < k; ++jj) {
    const std::size_t j = order[jj];
    out.sigma[jj] = sigma[j];
    for (std::size_t r = 0; r < k; ++r) out.V(r, jj) = v(r, j);
    if (sigma[j] > 0.0)
      for (std::size_t r = 0; r < m; ++r) out.U(r, jj) = w(r, j) / sigma[j];
  }
  return out;
}

std::vector<double> singular_values(const CMatrix& a) { return svd(a).sigma; }

namespace {
int rank_from_sigma(const std::vector<double>& sigma, double tol_rank) {
  if (sigma.empty() || sigma.front() == 0.0) return 0;
  const double thr = tol_rank * sigma.front();
  return static_cast<int>(std::count_if(sigma.begin(), sigma.end(), [&](double s) { return s > thr; }));
}
}  // namespace

int rank_at(const CMatrix& m, double tol_rank) {
  if (!(tol_rank > 0.0)) throw DomainError("rank_at: tol_rank must be positive");
  return rank_from_sigma(singular_values(m), tol_rank);
}

CVector null_vector(const CMatrix& m, double tol_rank) {
  require_square(m, "null_vector");
  const Svd s = svd(m);
  const int r = rank_from_sigma(s.sigma, tol_rank);
  const int n = static_cast<int>(m.cols());
  if (r != n - 1)
    throw DegeneracyError("null_vector: kernel dimension is " + std::to_string(n - r) + ", expected 1");
  return gauge_fixed(s.V.column(m.cols() - 1));
}

CMatrix trailing_right_singular_basis(const CMatrix& m, std::size_t dim) {
  if (dim > m.cols()) throw DimensionError("trailing_right_singular_basis: dim exceeds columns");
  const Svd s = svd(m);
  CMatrix basis(m.cols(), dim);
  for (std::size_t j = 0; j < dim; ++j) basis.set_column(j, s.V.column(m.cols() - dim + j));
  return basis;
}

CVector solve_on_complement(const CMatrix& m, const CVector& b, double tol_rank) {
  if (m.rows() != b.size()) throw DimensionError("solve_on_complement: shape mismatch");
  const Svd s = svd(m);
  const int r = rank_from_sigma(s.sigma, tol_rank);
  CVector x(m.cols());
  CVector in_range(m.rows());
  for (int k = 0; k < r; ++k) {
    const CVector uk = s.U.column(static_cast<std::size_t>(k));
    const Complex coef = hermitian_inner(b, uk);
    in_range += coef * uk;
    x += (coef / s.sigma[static_cast<std::size_t>(k)]) * s.V.column(static_cast<std::size_t>(k));
  }
  const double outside = (b - in_range).norm();
  const double sigma_max = s.sigma.empty() ? 0.0 : s.sigma.front();
  const double bound = tol_rank * (sigma_max * x.norm() + b.norm());
  if (outside > bound)
    throw ConsistencyError("solve_on_complement: right-hand side has component " +
                           std::to_string(outside) + " outside the range (bound " +
                           std::to_string(bound) + ")");
  return x;
}

CVector solve(const CMatrix& a, const CVector& b) {
  require_square(a, "solve");
  if (a.rows() != b.size()) throw DimensionError("solve: shape mismatch");
  return lu_solve(lu_factor(a, 0.0), b);
}

CMatrix inverse(const CMatrix& a) {
  require_square(a, "inverse");
  const LuFactors f = lu_factor(a, 0.0);
  const std::size_t n = a.rows();
  CMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) inv.set_column(j, lu_solve(f, CVector::unit(n, j)));
  return inv;
}

double condition_number(const CMatrix& a) {
  const auto sigma = singular_values(a);
  if (sigma.empty()) return 1.0;
  if (sigma.back() == 0.0) return std::numeric_limits<double>::infinity();
  return sigma.front() / sigma.back();
}

Complex stable_sqrt(double re, double im) {
  if (re == 0.0 && im == 0.0) return {};
  const double mod = std::hypot(re, im);
  if (re >= 0.0) {
    const double a = std::sqrt(0.5 * (mod + re));
    return {a, im / (2.0 * a)};
  }
  const double b = std::copysign(std::sqrt(0.5 * (mod - re)), im < 0.0 ? -1.0 : 1.0);
  return {im / (2.0 * b), b};
}

}  // namespace eigcouple
