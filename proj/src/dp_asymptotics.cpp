#include "eigcouple/dp_asymptotics.hpp"

#include <algorithm>
#include <cmath>

namespace eigcouple {

namespace {

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

// Unit eigenvector of a 2x2 matrix for eigenvalue mu; `fallback` for scalar matrices.
std::array<Complex, 2> eigvec2(const std::array<std::array<Complex, 2>, 2>& r, Complex mu, std::size_t fallback) {
  const std::array<Complex, 2> x1{r[0][1], mu - r[0][0]}, x2{mu - r[1][1], r[1][0]};
  const double n1 = std::hypot(std::abs(x1[0]), std::abs(x1[1]));
  const double n2 = std::hypot(std::abs(x2[0]), std::abs(x2[1]));
  const double scale = std::abs(r[0][0]) + std::abs(r[0][1]) + std::abs(r[1][0]) + std::abs(r[1][1]);
  if (std::max(n1, n2) <= 1e-14 * scale || std::max(n1, n2) == 0.0)
    return fallback == 0 ? std::array<Complex, 2>{1.0, 0.0} : std::array<Complex, 2>{0.0, 1.0};
  const auto& x = n1 >= n2 ? x1 : x2;
  const CVector g = gauge_fixed(CVector{x[0] / std::max(n1, n2), x[1] / std::max(n1, n2)});
  return {g[0], g[1]};
}

}  // namespace

CMatrix ReducedProblem::matrix() const {
  return CMatrix{{entries[0][0], entries[0][1]}, {entries[1][0], entries[1][1]}};
}

ReducedProblem reduced_problem(const CMatrix& a1, const DPFrame& frame) {
  if (!a1.is_square() || a1.rows() != frame.u1.size()) throw DimensionError("reduced_problem: size mismatch");
  const std::array<CVector, 2> au{a1 * frame.u1, a1 * frame.u2};
  const std::array<const CVector*, 2> v{&frame.v1, &frame.v2};
  ReducedProblem rp{};
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 2; ++k) rp.entries[j][k] = hermitian_inner(au[k], *v[j]);
  const auto& e = rp.entries;
  const Complex mean = (e[0][0] + e[1][1]) / 2.0;
  const Complex q = (e[0][0] - e[1][1]) * (e[0][0] - e[1][1]) / 4.0 + e[0][1] * e[1][0];
  const Complex root = stable_sqrt(q.real(), q.imag());
  rp.mu_plus = mean + root;
  rp.mu_minus = mean - root;
  rp.coeff_plus = eigvec2(e, rp.mu_plus, 0);
  rp.coeff_minus = eigvec2(e, rp.mu_minus, 1);
  return rp;
}

DPLocalModel dp_sensitivities(const MatrixFamily& fam, const DPFrame& frame, const ParameterPoint& p0) {
  if (p0.size() != fam.n_params()) throw DimensionError("dp_sensitivities: parameter point has the wrong size");
  DPLocalModel m;
  m.p0 = p0;
  m.lambda0 = frame.lambda0;
  const std::size_t n = fam.n_params();
  m.d11.resize(n), m.d12.resize(n), m.d21.resize(n), m.d22.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    const CMatrix d = fam.derivative(p0, s);
    const CVector du1 = d * frame.u1, du2 = d * frame.u2;
    m.d11[s] = hermitian_inner(du1, frame.v1);
    m.d12[s] = hermitian_inner(du1, frame.v2);
    m.d21[s] = hermitian_inner(du2, frame.v1);
    m.d22[s] = hermitian_inner(du2, frame.v2);
  }
  return m;
}

Complex cdot(const std::vector<Complex>& v, std::span<const double> dp) {
  if (v.size() != dp.size()) throw DimensionError("cdot: size mismatch");
  Complex s{};
  for (std::size_t k = 0; k < v.size(); ++k) s += v[k] * dp[k];
  return s;
}

DPSplit split_multiparam(const DPLocalModel& m, std::span<const double> dp) {
  const Complex a = cdot(m.d11, dp), b = cdot(m.d22, dp), x = cdot(m.d12, dp), y = cdot(m.d21, dp);
  const Complex mean = m.lambda0 + (a + b) / 2.0;
  DPSplit s{};
  s.c = (a - b) * (a - b) / 4.0 + x * y;
  const Complex w = stable_sqrt(s.c.real(), s.c.imag());
  s.lambda_plus = mean + w;
  s.lambda_minus = mean - w;
  s.re_plus = s.lambda_plus.real(), s.re_minus = s.lambda_minus.real();
  s.im_plus = s.lambda_plus.imag(), s.im_minus = s.lambda_minus.imag();
  return s;
}

PersistenceReport persistence_conditions(const DPLocalModel& m, std::span<const double> dp) {
  const Complex delta = cdot(m.d11, dp) - cdot(m.d22, dp), x = cdot(m.d12, dp), y = cdot(m.d21, dp);
  const Complex c = delta * delta / 4.0 + x * y;
  return {c.real(), c.imag(), {delta.real(), delta.imag(), x.real(), x.imag(), y.real(), y.imag()}};
}

std::array<Complex, 2> one_param_slopes(const DPLocalModel& m) {
  if (m.n() == 0) throw DimensionError("one_param_slopes: model has no parameters");
  const Complex delta = m.d11[0] - m.d22[0];
  const Complex q = delta * delta / 4.0 + m.d12[0] * m.d21[0];
  const Complex root = stable_sqrt(q.real(), q.imag());
  const Complex mean = (m.d11[0] + m.d22[0]) / 2.0;
  return {mean + root, mean - root};
}

std::string_view to_string(CrossingScenario s) {
  switch (s) {
    case CrossingScenario::NoCrossing: return "no-crossing";
    case CrossingScenario::OneReOneIm: return "one-re-one-im";
    case CrossingScenario::TwoRe: return "two-re";
    case CrossingScenario::TwoIm: return "two-im";
    case CrossingScenario::Degenerate: return "degenerate";
  }
  return "?";
}

AvoidedCrossingReport avoided_crossing_1p(const DPLocalModel& m, std::span<const double> dp_rest) {
  if (m.n() == 0 || dp_rest.size() + 1 != m.n())
    throw DimensionError("avoided_crossing_1p: dp_rest must hold the n - 1 fixed components");
  const Complex delta1 = m.d11[0] - m.d22[0];
  Complex sd{}, sx{}, sy{};
  for (std::size_t k = 0; k < dp_rest.size(); ++k) {
    sd += (m.d11[k + 1] - m.d22[k + 1]) * dp_rest[k];
    sx += m.d12[k + 1] * dp_rest[k];
    sy += m.d21[k + 1] * dp_rest[k];
  }
  AvoidedCrossingReport rep{};
  rep.c2 = delta1 * delta1 / 4.0 + m.d12[0] * m.d21[0];
  rep.c1 = delta1 * sd / 2.0 + m.d12[0] * sy + sx * m.d21[0];
  rep.c0 = sd * sd / 4.0 + sx * sy;
  const double i0 = rep.c0.imag(), i1 = rep.c1.imag(), i2 = rep.c2.imag();
  rep.D = i1 * i1 - 4.0 * i0 * i2;
  rep.scenario = CrossingScenario::Degenerate;

  auto re_c = [&](double x) { return (rep.c0 + rep.c1 * x + rep.c2 * (x * x)).real(); };
  auto c_zero = [&](double x, double v) {
    return std::abs(v) <= kScenarioTol * (std::abs(rep.c0) + std::abs(rep.c1) * std::abs(x) + std::abs(rep.c2) * x * x);
  };

  if (all_zero(dp_rest)) {
    rep.note = "dp_rest = 0: the sweep passes through the DP itself";
    return rep;
  }
  if (std::abs(i2) <= kScenarioTol * std::abs(rep.c2) || rep.c2 == Complex{}) {
    rep.note = "Im c2 = 0: the quadratic for Im c degenerates";
    if (std::abs(i1) > kScenarioTol * std::abs(rep.c1) && i1 != 0.0) {
      rep.dp1_a = -i0 / i1;
      rep.c_a = re_c(*rep.dp1_a);
      rep.note += "; single linear root";
    }
    return rep;
  }
  if (std::abs(rep.D) <= kScenarioTol * (i1 * i1 + 4.0 * std::abs(i0 * i2))) {
    rep.note = "D = 0: Im c has a double root";
    return rep;
  }
  if (rep.D < 0.0) {
    rep.scenario = CrossingScenario::NoCrossing;
    return rep;
  }
  const double sq = std::sqrt(rep.D);
  rep.dp1_a = (-i1 - sq) / (2.0 * i2);
  rep.dp1_b = (-i1 + sq) / (2.0 * i2);
  rep.c_a = re_c(*rep.dp1_a);
  rep.c_b = re_c(*rep.dp1_b);
  if (c_zero(*rep.dp1_a, *rep.c_a) || c_zero(*rep.dp1_b, *rep.c_b)) {
    rep.note = "c vanishes at a root of Im c: the sweep hits a DP";
    return rep;
  }
  const int sa = sign_of(*rep.c_a), sb = sign_of(*rep.c_b);
  if (sa != sb)
    rep.scenario = CrossingScenario::OneReOneIm;
  else
    rep.scenario = sa < 0 ? CrossingScenario::TwoRe : CrossingScenario::TwoIm;
  return rep;
}

std::string_view to_string(SurfaceType t) {
  switch (t) {
    case SurfaceType::ConeNoIntersection: return "cone-no-intersection";
    case SurfaceType::OneReOneImLine: return "one-re-one-im-line";
    case SurfaceType::ReClusterOfShells: return "re-cluster-of-shells";
    case SurfaceType::ImDoubleIntersection: return "im-double-intersection";
    case SurfaceType::Degenerate: return "degenerate";
  }
  return "?";
}

SurfaceTypeReport surface_classification_2p(const DPLocalModel& m) {
  if (m.n() != 2) throw DimensionError("surface_classification_2p: requires a two-parameter model");
  const Complex e1 = m.d11[0] - m.d22[0], e2 = m.d11[1] - m.d22[1];
  SurfaceTypeReport rep{};
  rep.c11 = e1 * e1 / 4.0 + m.d12[0] * m.d21[0];
  rep.c22 = e2 * e2 / 4.0 + m.d12[1] * m.d21[1];
  rep.c12 = e1 * e2 / 2.0 + m.d12[0] * m.d21[1] + m.d12[1] * m.d21[0];
  const double a = rep.c11.imag(), b = rep.c12.imag(), c = rep.c22.imag();
  rep.D_prime = b * b - 4.0 * a * c;
  rep.type = SurfaceType::Degenerate;
  const double cscale = std::abs(rep.c11) + std::abs(rep.c12) + std::abs(rep.c22);

  if (cscale == 0.0 || std::abs(rep.D_prime) <= kScenarioTol * (b * b + 4.0 * std::abs(a * c))) {
    rep.note = "D' = 0: Im c is a perfect square or vanishes";
    return rep;
  }
  if (rep.D_prime < 0.0) {
    rep.type = SurfaceType::ConeNoIntersection;
    return rep;
  }
  const double sq = std::sqrt(rep.D_prime);
  std::array<double, 2> la, lb;
  if (std::abs(a) <= kScenarioTol * cscale) {
    rep.chart_degenerate = true;
    rep.note = "Im c11 = 0: lines solved for dp1 in terms of dp2";
    la = {1.0, 0.0};
    lb = {c, -b};
  } else {
    la = {b + sq, -2.0 * a};
    lb = {b - sq, -2.0 * a};
  }
  for (auto* l : {&la, &lb}) {
    const double n = std::hypot((*l)[0], (*l)[1]);
    *l = {(*l)[0] / n, (*l)[1] / n};
  }
  rep.line_a = la;
  rep.line_b = lb;
  auto c_on = [&](const std::array<double, 2>& d) {
    return (rep.c11 * (d[0] * d[0]) + rep.c12 * (d[0] * d[1]) + rep.c22 * (d[1] * d[1])).real();
  };
  const double ga = c_on(la), gb = c_on(lb);
  rep.gamma_a = std::abs(ga) <= kScenarioTol * cscale ? 0 : sign_of(ga);
  rep.gamma_b = std::abs(gb) <= kScenarioTol * cscale ? 0 : sign_of(gb);
  if (rep.gamma_a == 0 || rep.gamma_b == 0) {
    rep.note = "c vanishes along a line: a DP line";
    return rep;
  }
  if (rep.gamma_a != rep.gamma_b)
    rep.type = SurfaceType::OneReOneImLine;
  else
    rep.type = rep.gamma_a < 0 ? SurfaceType::ReClusterOfShells : SurfaceType::ImDoubleIntersection;
  return rep;
}

}  // namespace eigcouple
