#include "eigcouple/degeneracy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eigcouple {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kGramCondLimit = 1e8;

bool within(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(a)); }

}  // namespace

// ---------------------------------------------------------------------------
// Clusters

std::vector<SpectralCluster> find_double_eigenvalues(const std::vector<Complex>& ev, double tol) {
  if (!(tol > 0.0)) throw DomainError("find_double_eigenvalues: tol_cluster must be positive");
  struct Candidate {
    double dist;
    std::size_t i, j;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = i + 1; j < ev.size(); ++j)
      if (within(ev[i], ev[j], tol)) cands.push_back({std::abs(ev[i] - ev[j]), i, j});
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) { return a.dist < b.dist; });

  std::vector<bool> used(ev.size(), false);
  std::vector<SpectralCluster> out;
  for (const auto& c : cands) {
    if (used[c.i] || used[c.j]) continue;
    used[c.i] = used[c.j] = true;
    SpectralCluster cl;
    cl.members = {ev[c.i], ev[c.j]};
    cl.indices = {c.i, c.j};
    cl.center = 0.5 * (ev[c.i] + ev[c.j]);
    cl.internal_gap = c.dist;
    cl.external_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < ev.size(); ++k) {
      if (k == c.i || k == c.j) continue;
      const double d = std::abs(ev[k] - cl.center);
      cl.external_gap = std::min(cl.external_gap, d);
      if (d <= 10.0 * tol * (1.0 + std::abs(cl.center)))
        throw MultiplicityError("find_double_eigenvalues: third eigenvalue near cluster center");
    }
    out.push_back(cl);
  }
  std::sort(out.begin(), out.end(), [](const SpectralCluster& a, const SpectralCluster& b) {
    return a.indices[0] < b.indices[0];
  });
  return out;
}

std::vector<SpectralCluster> find_double_eigenvalues(const CMatrix& a, double tol) {
  return find_double_eigenvalues(eigenvalues(a), tol);
}

std::string_view to_string(DegeneracyKind k) {
  switch (k) {
    case DegeneracyKind::Simple: return "Simple";
    case DegeneracyKind::DP: return "DP";
    case DegeneracyKind::EP: return "EP";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Classification

DegeneracyClass classify(const CMatrix& a, Complex lambda0, double tol_rank, double tol_cluster) {
  if (!a.is_square()) throw DimensionError("classify: matrix must be square");
  if (!(tol_rank > 0.0)) throw DomainError("classify: tol_rank must be positive");
  DegeneracyClass out;
  out.singular_values = singular_values(shifted(a, lambda0));
  const auto& s = out.singular_values;
  const double thr = tol_rank * s.front();
  for (double x : s)
    if (x > 0.1 * thr && x < 10.0 * thr)
      throw IndeterminateError("classify: singular value too close to the rank threshold", s);
  const int rank = static_cast<int>(std::count_if(s.begin(), s.end(), [&](double x) { return x > thr; }));
  out.geometric_multiplicity = static_cast<int>(a.rows()) - rank;

  const auto ev = eigenvalues(a);
  out.algebraic_multiplicity = static_cast<int>(
      std::count_if(ev.begin(), ev.end(), [&](Complex z) { return within(lambda0, z, tol_cluster); }));

  if (out.geometric_multiplicity == 0 || out.algebraic_multiplicity == 0)
    throw DegeneracyError("classify: lambda0 is not an eigenvalue");
  if (out.algebraic_multiplicity > 2 || out.geometric_multiplicity > 2)
    throw MultiplicityError("classify: multiplicity above 2 is not supported");
  if (out.algebraic_multiplicity == 1) {
    out.kind = DegeneracyKind::Simple;
  } else {
    out.kind = out.geometric_multiplicity == 2 ? DegeneracyKind::DP : DegeneracyKind::EP;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Jordan chain

double ChainResiduals::max() const {
  return std::max({right_eigen, right_associated, left_eigen, left_associated, norm_u1_v0, norm_u1_v1});
}

ChainResiduals chain_residuals(const CMatrix& a, const JordanChain& c) {
  const CMatrix m = shifted(a, c.lambda0);
  const CMatrix ms = m.adjoint();
  return {(m * c.u0).norm(),
          (m * c.u1 - c.u0).norm(),
          (ms * c.v0).norm(),
          (ms * c.v1 - c.v0).norm(),
          std::abs(hermitian_inner(c.u1, c.v0) - 1.0),
          std::abs(hermitian_inner(c.u1, c.v1))};
}

JordanChain jordan_chain(const CMatrix& a, Complex lambda0, double tol_rank) {
  const DegeneracyClass cls = classify(a, lambda0, tol_rank);
  if (cls.kind != DegeneracyKind::EP)
    throw ClassificationError("jordan_chain: eigenvalue is " + std::string(to_string(cls.kind)) +
                              ", not EP");
  return complete_chain(a, lambda0, null_vector(shifted(a, lambda0), tol_rank), tol_rank);
}

JordanChain complete_chain(const CMatrix& a, Complex lambda0, const CVector& u0, double tol_rank) {
  if (u0.size() != a.rows()) throw DimensionError("complete_chain: vector length");
  const CMatrix m = shifted(a, lambda0);
  const CMatrix ms = m.adjoint();

  JordanChain c;
  c.lambda0 = lambda0;
  c.u0 = u0;
  c.u1 = solve_on_complement(m, c.u0, tol_rank);
  c.u1 -= (hermitian_inner(c.u1, c.u0) / hermitian_inner(c.u0, c.u0)) * c.u0;  // (u1, u0) = 0

  c.v0 = null_vector(ms, tol_rank);
  const Complex s = hermitian_inner(c.u1, c.v0);
  if (std::abs(s) == 0.0) throw ModelError("jordan_chain: associated vector orthogonal to left kernel");
  c.v0 *= 1.0 / std::conj(s);

  c.v1 = solve_on_complement(ms, c.v0, tol_rank);
  c.v1 -= std::conj(hermitian_inner(c.u1, c.v1)) * c.v0;
  return c;
}

// ---------------------------------------------------------------------------
// DP frame

double FrameResiduals::max() const { return std::max({right_eigen, left_eigen, biorthogonality}); }

FrameResiduals frame_residuals(const CMatrix& a, const DPFrame& f) {
  const CMatrix m = shifted(a, f.lambda0);
  const CMatrix ms = m.adjoint();
  FrameResiduals r{};
  r.right_eigen = std::max((m * f.u1).norm(), (m * f.u2).norm());
  r.left_eigen = std::max((ms * f.v1).norm(), (ms * f.v2).norm());
  r.biorthogonality = std::max({std::abs(hermitian_inner(f.u1, f.v1) - 1.0),
                                std::abs(hermitian_inner(f.u2, f.v2) - 1.0),
                                std::abs(hermitian_inner(f.u1, f.v2)),
                                std::abs(hermitian_inner(f.u2, f.v1))});
  return r;
}

namespace {

void require_dp(const CMatrix& a, Complex lambda0, double tol_rank) {
  const DegeneracyClass cls = classify(a, lambda0, tol_rank);
  if (cls.kind != DegeneracyKind::DP)
    throw ClassificationError("dp_frame: eigenvalue is " + std::string(to_string(cls.kind)) + ", not DP");
}

DPFrame biorthonormalize(const CMatrix& a, Complex lambda0, const CVector& u1, const CVector& u2) {
  const CMatrix w = trailing_right_singular_basis(shifted(a, lambda0).adjoint(), 2);
  const CVector us[] = {u1, u2};
  const CMatrix u = CMatrix::from_columns(us);
  const CMatrix gram = u.adjoint() * w;
  if (condition_number(gram) > kGramCondLimit)
    throw FrameError("dp_frame: Gram matrix of right/left eigenspaces is near singular");
  const CMatrix v = w * inverse(gram);
  return {lambda0, u1, u2, v.column(0), v.column(1)};
}

}  // namespace

DPFrame dp_frame_with(const CMatrix& a, Complex lambda0, const CVector& u1, const CVector& u2,
                      double tol_rank) {
  require_dp(a, lambda0, tol_rank);
  if (u1.size() != a.rows() || u2.size() != a.rows()) throw DimensionError("dp_frame_with: vector length");
  return biorthonormalize(a, lambda0, u1, u2);
}

DPFrame dp_frame(const CMatrix& a, Complex lambda0, double tol_rank) {
  require_dp(a, lambda0, tol_rank);
  const std::size_t m = a.rows();
  const CMatrix z = trailing_right_singular_basis(shifted(a, lambda0), 2);

  // Projector P = Z Z*; |P e_k| is the norm of row k of Z.
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double nk = std::hypot(std::abs(z(k, 0)), std::abs(z(k, 1)));
    if (nk > best_norm * (1.0 + 1e-12)) {
      best = k;
      best_norm = nk;
    }
  }
  CVector u1 = std::conj(z(best, 0)) * z.column(0) + std::conj(z(best, 1)) * z.column(1);
  u1 *= 1.0 / u1.norm();

  // Unit complement of u1 inside span(Z): the column with the larger residual, re-projected.
  CVector r0 = z.column(0) - hermitian_inner(z.column(0), u1) * u1;
  CVector r1 = z.column(1) - hermitian_inner(z.column(1), u1) * u1;
  CVector u2 = r0.norm() >= r1.norm() ? r0 : r1;
  u2 -= hermitian_inner(u2, u1) * u1;
  u2 *= 1.0 / u2.norm();
  u2 = gauge_fixed(u2);

  return biorthonormalize(a, lambda0, u1, u2);
}

// ---------------------------------------------------------------------------
// Codimension table

std::string_view to_string(MatrixType t) {
  switch (t) {
    case MatrixType::RealSymmetric: return "real-symmetric";
    case MatrixType::RealNonsymmetric: return "real-nonsymmetric";
    case MatrixType::Hermitian: return "Hermitian";
    case MatrixType::ComplexSymmetric: return "complex-symmetric";
    case MatrixType::ComplexNonsymmetric: return "complex-nonsymmetric";
  }
  return "?";
}

std::optional<MatrixType> parse_matrix_type(std::string_view s) {
  for (auto t : {MatrixType::RealSymmetric, MatrixType::RealNonsymmetric, MatrixType::Hermitian,
                 MatrixType::ComplexSymmetric, MatrixType::ComplexNonsymmetric})
    if (s == to_string(t)) return t;
  if (s == "hermitian") return MatrixType::Hermitian;
  return std::nullopt;
}

std::optional<int> codimension(MatrixType type, DegeneracyKind kind) {
  if (kind == DegeneracyKind::Simple) return 0;
  const bool dp = kind == DegeneracyKind::DP;
  switch (type) {
    case MatrixType::RealSymmetric: return dp ? std::optional<int>(2) : std::nullopt;
    case MatrixType::RealNonsymmetric: return dp ? 3 : 1;
    case MatrixType::Hermitian: return dp ? std::optional<int>(3) : std::nullopt;
    case MatrixType::ComplexSymmetric: return dp ? 4 : 2;
    case MatrixType::ComplexNonsymmetric: return dp ? 6 : 2;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// EP search

namespace {

struct PairState {
  Complex lp, lm;  // tracked eigenvalues
  Complex disc;    // ((lp - lm)/2)^2 from the restricted 2x2 operator
  CMatrix Q, Y;    // right basis and biorthogonal left basis of the invariant subspace
  CMatrix B;
};

// Mutually nearest pair closest to `anchor` (or the globally closest pair).
std::pair<std::size_t, std::size_t> select_pair(const std::vector<Complex>& ev,
                                                std::optional<Complex> anchor) {
  const std::size_t m = ev.size();
  auto nearest = [&](std::size_t i) {
    std::size_t best = i == 0 ? 1 : 0;
    for (std::size_t k = 0; k < m; ++k)
      if (k != i && std::abs(ev[k] - ev[i]) < std::abs(ev[best] - ev[i])) best = k;
    return best;
  };
  double best_score = std::numeric_limits<double>::infinity();
  std::pair<std::size_t, std::size_t> best{m, m};
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = nearest(i);
    if (j < i) continue;
    const double score = anchor ? std::abs(0.5 * (ev[i] + ev[j]) - *anchor)
                                : std::abs(ev[i] - ev[j]) / (1.0 + std::abs(ev[i]));
    if (score < best_score) {
      best_score = score;
      best = {i, j};
    }
  }
  if (best.first == m) throw TrackingError("find_ep: no mutually nearest eigenvalue pair");
  if (anchor) {
    // The pair closest to the anchor must also be mutually nearest.
    std::size_t closest = 0;
    for (std::size_t k = 1; k < m; ++k)
      if (std::abs(ev[k] - *anchor) < std::abs(ev[closest] - *anchor)) closest = k;
    if (closest != best.first && closest != best.second)
      throw TrackingError("find_ep: tracked pair is ambiguous");
  }
  return best;
}

PairState pair_state(const CMatrix& a, Complex l1, Complex l2) {
  PairState s;
  s.lp = l1;
  s.lm = l2;
  const CMatrix m2 = shifted(a, l1) * shifted(a, l2);
  s.Q = trailing_right_singular_basis(m2, 2);
  const CMatrix p = trailing_right_singular_basis(m2.adjoint(), 2);
  const CMatrix qp = s.Q.adjoint() * p;
  if (condition_number(qp) > 1e12)
    throw NonConvergenceError("find_ep: invariant subspace of the pair is ill conditioned", {});
  s.Y = p * inverse(qp);
  s.B = s.Y.adjoint() * a * s.Q;
  const Complex d = 0.5 * (s.B(0, 0) - s.B(1, 1));
  s.disc = d * d + s.B(0, 1) * s.B(1, 0);
  return s;
}

PairState track(const CMatrix& a, std::optional<Complex> anchor) {
  const auto ev = eigenvalues(a);
  if (ev.size() < 2) throw DimensionError("find_ep: matrix dimension must be at least 2");
  const auto [i, j] = select_pair(ev, anchor);
  return pair_state(a, ev[i], ev[j]);
}

}  // namespace

EPSearchResult find_ep(const MatrixFamily& f, const ParameterPoint& p_guess, const PairSelector& which,
                       const EPSearchOptions& opts) {
  if (f.n_params() != 2) throw DimensionError("find_ep: family must have exactly two parameters");
  if (p_guess.size() != 2) throw DimensionError("find_ep: guess must have two coordinates");

  ParameterPoint p = p_guess;
  CMatrix a = f.evaluate(p);
  PairState st = track(a, which.target);
  Complex anchor = 0.5 * (st.lp + st.lm);

  EPSearchResult res;
  res.residual_history.push_back(std::abs(st.disc));
  auto floor_of = [](const CMatrix& m) {
    const double s = std::max(1.0, m.frobenius_norm());
    return 64.0 * kEps * s * s;
  };

  bool converged = std::abs(st.disc) <= floor_of(a);
  int it = 0;
  while (!converged) {
    if (it >= opts.max_iterations)
      throw NonConvergenceError("find_ep: iteration cap reached", res.residual_history);
    ++it;

    // J = d disc / dp, from the restricted operator; similarity terms drop out.
    const Complex d = 0.5 * (st.B(0, 0) - st.B(1, 1));
    Complex jac[2];
    for (std::size_t k = 0; k < 2; ++k) {
      const CMatrix db = st.Y.adjoint() * f.derivative(p, k) * st.Q;
      jac[k] = d * (db(0, 0) - db(1, 1)) + db(0, 1) * st.B(1, 0) + st.B(0, 1) * db(1, 0);
    }
    const double j11 = jac[0].real(), j12 = jac[1].real(), j21 = jac[0].imag(), j22 = jac[1].imag();
    const double det = j11 * j22 - j12 * j21;
    const double jscale = std::max({std::abs(j11), std::abs(j12), std::abs(j21), std::abs(j22)});
    if (!(std::abs(det) > 1e-14 * jscale * jscale))
      throw NonConvergenceError("find_ep: singular Jacobian", res.residual_history);
    const double fr = st.disc.real(), fi = st.disc.imag();
    const double dp0 = -(j22 * fr - j12 * fi) / det;
    const double dp1 = -(-j21 * fr + j11 * fi) / det;
    const double step_norm = std::hypot(dp0, dp1);
    const double p_norm = std::hypot(p[0], p[1]);

    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h, t *= 0.5) {
      ParameterPoint q{p[0] + t * dp0, p[1] + t * dp1};
      if (!f.in_domain(q)) continue;
      CMatrix aq = f.evaluate(q);
      PairState sq;
      try {
        sq = track(aq, anchor);
      } catch (const TrackingError&) {
        continue;
      }
      if (std::abs(sq.disc) < std::abs(st.disc) || step_norm * t <= opts.step_tol * (1.0 + p_norm)) {
        p = q;
        a = std::move(aq);
        st = std::move(sq);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (std::abs(st.disc) <= 1e3 * floor_of(a)) break;  // stalled at the roundoff floor
      throw NonConvergenceError("find_ep: line search failed", res.residual_history);
    }
    anchor = 0.5 * (st.lp + st.lm);
    res.residual_history.push_back(std::abs(st.disc));
    converged = step_norm <= opts.step_tol * (1.0 + p_norm) || st.disc == Complex{};
  }

  res.p_star = p;
  res.lambda0 = anchor;
  res.iterations = it;
  res.splitting = std::abs(st.lp - st.lm);
  return res;
}

}  // namespace eigcouple
