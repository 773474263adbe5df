#include "eigcouple/ep_asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace eigcouple {

namespace {

constexpr double kPi = std::numbers::pi;

double tail_dot(std::span<const double> v, std::span<const double> dp_fixed) {
  double s = 0.0;
  for (std::size_t k = 0; k < dp_fixed.size(); ++k) s += v[k + 1] * dp_fixed[k];
  return s;
}

void require_size(const EPLocalModel& m, std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw DimensionError(std::string(what) + ": expected " + std::to_string(want) + " components, got " +
                         std::to_string(got) + " for a model with n = " + std::to_string(m.n()));
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

namespace {
// Principal sqrt(mu1 eps); "+ 0.0" drops the sign of a zero imaginary part.
Complex root_of(Complex mu1, double eps) {
  const Complex z = mu1 * eps;
  return stable_sqrt(z.real(), z.imag() + 0.0);
}
}  // namespace

std::array<Complex, 2> EPCurveSplit::lambda(double eps) const {
  const Complex s = root_of(mu1, eps);
  return {lambda0 + s + mu2 * eps, lambda0 - s + mu2 * eps};
}

std::array<CVector, 2> EPCurveSplit::vectors(double eps) const {
  const Complex s = root_of(mu1, eps);
  const CVector lin = (mu1 * eps) * chain.u0 + (mu2 * eps) * chain.u1 - eps * g_inv_a1u0;
  return {chain.u0 + s * chain.u1 + lin, chain.u0 - s * chain.u1 + lin};
}

EPCurveSplit curve_split(const JordanChain& chain, const CMatrix& a0, const CMatrix& a1) {
  if (a0.rows() != chain.u0.size() || a1.rows() != a0.rows() || !a1.is_square())
    throw DimensionError("curve_split: matrix and chain sizes differ");
  EPCurveSplit out;
  out.lambda0 = chain.lambda0;
  out.chain = chain;
  const CVector a1u0 = a1 * chain.u0;
  const CVector a1u1 = a1 * chain.u1;
  out.mu1 = hermitian_inner(a1u0, chain.v0);
  out.mu2 = (hermitian_inner(a1u0, chain.v1) + hermitian_inner(a1u1, chain.v0)) / 2.0;
  const CMatrix g = shifted(a0, chain.lambda0) + CMatrix::outer(chain.u1, chain.v1);
  if (condition_number(g) > 1e10) throw ModelError("curve_split: A0 - l0 I + u1 v1^* is numerically singular");
  out.g_inv_a1u0 = solve(g, a1u0);
  return out;
}

bool EPLocalModel::degenerate() const {
  auto zero = [](const RealVector& v) { return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }); };
  return zero(f) && zero(g);
}

EPLocalModel sensitivities(const MatrixFamily& fam, const JordanChain& chain, const ParameterPoint& p0) {
  if (p0.size() != fam.n_params()) throw DimensionError("sensitivities: parameter point has the wrong size");
  EPLocalModel m;
  m.p0 = p0;
  m.lambda0 = chain.lambda0;
  const std::size_t n = fam.n_params();
  m.f.resize(n), m.g.resize(n), m.h.resize(n), m.r.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    const CMatrix d = fam.derivative(p0, s);
    const CVector du0 = d * chain.u0;
    const Complex fg = hermitian_inner(du0, chain.v0);
    const Complex hr = hermitian_inner(du0, chain.v1) + hermitian_inner(d * chain.u1, chain.v0);
    m.f[s] = fg.real(), m.g[s] = fg.imag();
    m.h[s] = hr.real(), m.r[s] = hr.imag();
  }
  return m;
}

Complex leading_offset(const EPLocalModel& m, std::span<const double> dp) {
  require_size(m, dp.size(), m.n(), "leading_offset");
  return stable_sqrt(dot(m.f, dp), dot(m.g, dp));
}

EPSurfacePoint surface_eval(const EPLocalModel& m, std::span<const double> dp) {
  const Complex w = leading_offset(m, dp);
  const double re_mid = m.lambda0.real() + dot(m.h, dp) / 2.0;
  const double im_mid = m.lambda0.imag() + dot(m.r, dp) / 2.0;
  return {re_mid + w.real(), re_mid - w.real(), im_mid + w.imag(), im_mid - w.imag()};
}

Tangency tangency_conditions(const EPLocalModel& m, std::span<const double> dp) {
  require_size(m, dp.size(), m.n(), "tangency_conditions");
  return {dot(m.f, dp), dot(m.g, dp)};
}

bool BranchCut::contains(std::span<const double> dp, double tol) const {
  const double gn = std::sqrt(dot(normal, normal));
  const double dn = std::sqrt(dot(dp, dp));
  if (dn == 0.0) return true;
  if (std::abs(dot(normal, dp)) > tol * gn * dn) return false;
  return f_sign * dot(f, dp) >= -tol * dn * std::sqrt(dot(f, f));
}

BranchCutSet branch_cuts(const EPLocalModel& m) {
  const double gn = std::sqrt(dot(m.g, m.g));
  if (gn == 0.0) throw ModelError("branch_cuts: g = 0, the first-order model has no cut structure");
  auto make = [&](int f_sign, const RealVector& lin) {
    BranchCut c;
    c.normal = m.g;
    c.f = m.f;
    c.f_sign = f_sign;
    c.level.resize(lin.size());
    for (std::size_t k = 0; k < lin.size(); ++k) c.level[k] = lin[k] / 2.0;
    if (m.n() == 2) {
      RealVector d{-m.g[1] / gn, m.g[0] / gn};
      if (f_sign * dot(m.f, d) < 0.0) d = {-d[0], -d[1]};
      c.ray = d;
    }
    return c;
  };
  return {make(-1, m.h), make(+1, m.r)};
}

double gamma_of(const EPLocalModel& m, std::span<const double> dp_fixed) {
  require_size(m, dp_fixed.size() + 1, m.n(), "gamma_of");
  double s = 0.0;
  for (std::size_t k = 0; k < dp_fixed.size(); ++k)
    s += (m.f[k + 1] * m.g[0] - m.f[0] * m.g[k + 1]) * dp_fixed[k];
  return s;
}

ConicReport complex_plane_conic(const EPLocalModel& m, std::span<const double> dp_fixed) {
  const double gamma = gamma_of(m, dp_fixed);
  const double f1 = m.f[0], g1 = m.g[0];
  if (g1 == 0.0)
    throw ChartError("complex_plane_conic: g1 = 0; reorder the parameters so the swept one has g1 != 0");
  const double rho = std::hypot(f1, g1);
  ConicReport c{};
  c.gamma = gamma;
  c.quadratic = {g1, -2.0 * f1, -g1};
  for (int k = 0; k < 2; ++k) {
    const double b = -(f1 + (k == 0 ? rho : -rho));
    c.asymptotes[k] = {g1, b};
    c.asymptote_slopes[k] = -g1 / b;  // b != 0 since rho > |f1| when g1 != 0
  }
  c.degenerate = gamma == 0.0;
  c.hyperbola_rhs = gamma * g1;
  // Eigenvectors of [[g1,-f1],[-f1,-g1]] for +rho; the branches open around it when gamma > 0.
  std::array<double, 2> e1{g1 + rho, -f1}, e2{-f1, rho - g1};
  auto& e = std::hypot(e1[0], e1[1]) >= std::hypot(e2[0], e2[1]) ? e1 : e2;
  const double en = std::hypot(e[0], e[1]);
  std::array<double, 2> plus{e[0] / en, e[1] / en}, minus{-plus[1], plus[0]};
  c.vertex_axis = gamma >= 0.0 ? plus : minus;
  const double dist = std::sqrt(std::abs(gamma) / rho);
  c.vertices = {{{dist * c.vertex_axis[0], dist * c.vertex_axis[1]},
                 {-dist * c.vertex_axis[0], -dist * c.vertex_axis[1]}}};
  return c;
}

std::string_view to_string(SectionCrossing c) {
  switch (c) {
    case SectionCrossing::Re: return "re";
    case SectionCrossing::Im: return "im";
    case SectionCrossing::Cusp: return "cusp";
  }
  return "?";
}

SectionReport cross_section(const EPLocalModel& m, std::span<const double> dp_fixed) {
  const double gamma = gamma_of(m, dp_fixed);
  const double f1 = m.f[0], g1 = m.g[0], h1 = m.h[0], r1 = m.r[0];
  if (g1 == 0.0) throw ChartError("cross_section: g1 = 0; reorder the parameters so the swept one has g1 != 0");
  SectionReport s{};
  s.gamma = gamma;
  s.p1_cross_offset = -tail_dot(m.g, dp_fixed) / g1;
  double hl = 0.0, rl = 0.0;
  for (std::size_t k = 0; k < dp_fixed.size(); ++k) {
    hl += (h1 * m.g[k + 1] - g1 * m.h[k + 1]) * dp_fixed[k];
    rl += (r1 * m.g[k + 1] - g1 * m.r[k + 1]) * dp_fixed[k];
  }
  s.re_level = m.lambda0.real() - hl / (2.0 * g1);
  s.im_level = m.lambda0.imag() - rl / (2.0 * g1);
  s.vertical_tangents = gamma == 0.0;
  // At the crossing <f,dp> = gamma/g1: negative glues the Re sheets, positive the Im sheets.
  if (gamma == 0.0) {
    s.crossing = SectionCrossing::Cusp;
  } else if (gamma / g1 < 0.0) {
    s.crossing = SectionCrossing::Re;
    const double k = (g1 / 2.0) * std::sqrt(-g1 / gamma);
    s.re_slopes = std::array<double, 2>{h1 / 2.0 + k, h1 / 2.0 - k};
  } else {
    s.crossing = SectionCrossing::Im;
    const double k = (g1 / 2.0) * std::sqrt(g1 / gamma);
    s.im_slopes = std::array<double, 2>{r1 / 2.0 + k, r1 / 2.0 - k};
  }
  if (std::all_of(dp_fixed.begin(), dp_fixed.end(), [](double x) { return x == 0.0; })) {
    const double rho = std::hypot(f1, g1);
    s.cusp_re_coeffs = std::array<double, 2>{(f1 + rho) / 2.0, (f1 - rho) / 2.0};
    s.cusp_im_coeffs = std::array<double, 2>{(-f1 + rho) / 2.0, (-f1 - rho) / 2.0};
  }
  return s;
}

std::vector<SectionSample> sample_cross_section(const EPLocalModel& m, std::span<const double> dp_fixed,
                                                double dp1_min, double dp1_max, std::size_t samples) {
  require_size(m, dp_fixed.size() + 1, m.n(), "sample_cross_section");
  if (samples < 2) throw DomainError("sample_cross_section: need at least 2 samples");
  std::vector<SectionSample> out;
  out.reserve(samples);
  RealVector dp(m.n());
  std::copy(dp_fixed.begin(), dp_fixed.end(), dp.begin() + 1);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = dp1_min + (dp1_max - dp1_min) * double(k) / double(samples - 1);
    dp[0] = t;
    out.push_back({m.p0[0] + t, surface_eval(m, dp)});
  }
  return out;
}

std::string_view to_string(LoopRegime r) {
  switch (r) {
    case LoopRegime::Inside: return "inside";
    case LoopRegime::On: return "on";
    case LoopRegime::Outside: return "outside";
  }
  return "?";
}

namespace {

// Accumulated arg change of z_k - center along a closed polyline, in turns.
int winding_number(const std::vector<Complex>& pts, Complex center) {
  double total = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Complex a = pts[k] - center, b = pts[(k + 1) % pts.size()] - center;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

std::size_t cyclic_sign_changes(const std::vector<double>& v) {
  int last = 0;
  for (double x : v)
    if (sign_of(x) != 0) last = sign_of(x);
  std::size_t n = 0;
  for (double x : v) {
    const int s = sign_of(x);
    if (s == 0) continue;
    if (s != last) ++n;
    last = s;
  }
  return n;
}

}  // namespace

LoopReport loop_trajectory(const EPLocalModel& m, const LoopSpec& loop) {
  if (m.n() != 2) throw DimensionError("loop_trajectory: requires a two-parameter model");
  if (!(loop.r > 0.0) || !std::isfinite(loop.r)) throw DomainError("loop_trajectory: radius must be positive");
  if (loop.samples < 16) throw DomainError("loop_trajectory: need at least 16 samples");
  const double a = loop.a, b = loop.b, r = loop.r;
  const double f1 = m.f[0], f2 = m.f[1], g1 = m.g[0], g2 = m.g[1];

  LoopReport rep{};
  const double c2 = a * a + b * b, r2 = r * r;
  rep.regime = c2 < r2 ? LoopRegime::Inside : (c2 == r2 ? LoopRegime::On : LoopRegime::Outside);
  rep.K = f2 * g1 - f1 * g2;
  rep.sigma = rep.K * (g1 * b - g2 * a);

  // Axis crossings: Re w = 0 or Im w = 0 only where <g,dp> = 0, i.e. R cos(phi - theta) = c.
  const double gg = g1 * g1 + g2 * g2;
  const double R = r * std::sqrt(gg), cc = -(g1 * a + g2 * b);
  if (R > 0.0 && std::abs(cc) <= R) {
    const double theta = std::atan2(g2, g1), dphi = std::acos(std::clamp(cc / R, -1.0, 1.0));
    std::vector<double> phis{theta - dphi};
    if (dphi > 0.0) phis.push_back(theta + dphi);
    for (double phi : phis) {
      phi = std::fmod(phi + 4.0 * kPi, 2.0 * kPi);
      const double fp = f1 * (a + r * std::cos(phi)) + f2 * (b + r * std::sin(phi));
      if (fp == 0.0) continue;  // loop passes through a point where both functionals vanish
      const double y = std::sqrt(std::abs(fp));
      for (double sgn : {1.0, -1.0}) {
        if (fp < 0.0)
          rep.crossings.push_back({'r', phi, 0.0, sgn * y});
        else
          rep.crossings.push_back({'i', phi, sgn * y, 0.0});
      }
    }
  }
  if (gg > 0.0) {
    const double disc = std::pow(g2 * a - g1 * b, 2) + (r2 - c2) * gg;
    if (disc >= 0.0) {
      for (double sgn : {1.0, -1.0}) {
        const double im_sq = rep.K * (g2 * a - g1 * b + sgn * std::sqrt(disc)) / gg;
        const double re_sq = rep.K * (g1 * b - g2 * a + sgn * std::sqrt(disc)) / gg;
        if (im_sq > 0.0) rep.formula_im_sq.push_back(im_sq);
        if (re_sq > 0.0) rep.formula_re_sq.push_back(re_sq);
      }
    }
  }

  // Sample the model and track branches by nearest-neighbour matching.
  const std::size_t N = loop.samples;
  std::vector<Complex> w(N), mid(N);
  std::vector<double> phis(N);
  double wmax = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const double phi = 2.0 * kPi * double(k) / double(N);
    const RealVector dp{a + r * std::cos(phi), b + r * std::sin(phi)};
    phis[k] = phi;
    w[k] = leading_offset(m, dp);
    mid[k] = m.lambda0 + Complex(dot(m.h, dp), dot(m.r, dp)) / 2.0;
    wmax = std::max(wmax, std::abs(w[k]));
  }
  // Orientation of w[j] continuing the branch si*w[i]; throws when the choice is unclear.
  auto match = [&](std::size_t i, int si, std::size_t j) {
    const Complex pi = mid[i] + double(si) * w[i], mi = mid[i] - double(si) * w[i];
    const double keep = std::abs(mid[j] + w[j] - pi) + std::abs(mid[j] - w[j] - mi);
    const double swap = std::abs(mid[j] - w[j] - pi) + std::abs(mid[j] + w[j] - mi);
    const bool resolved = std::min(std::abs(w[i]), std::abs(w[j])) <= 0.05 * wmax;
    if (!resolved && std::min(keep, swap) > 0.5 * std::max(keep, swap))
      throw ResolutionError("loop_trajectory: angle step too coarse to track the branches near phi = " +
                            std::to_string(phis[j]) + "; increase samples");
    return keep <= swap ? 1 : -1;
  };
  std::vector<int> sign(N, 1);
  for (std::size_t k = 1; k < N; ++k) sign[k] = match(k - 1, sign[k - 1], k);
  const int closing = match(N - 1, sign[N - 1], 0);
  rep.branches_swap = closing != sign[0];

  rep.samples.reserve(N);
  for (std::size_t k = 0; k < N; ++k) {
    const Complex off = double(sign[k]) * w[k];
    rep.samples.push_back({phis[k], mid[k] + off, mid[k] - off});
  }

  std::vector<Complex> lead_path;
  std::vector<std::vector<Complex>> curves;
  if (rep.branches_swap) {
    std::vector<Complex> c;
    for (auto& s : rep.samples) c.push_back(s.plus);
    for (auto& s : rep.samples) c.push_back(s.minus);
    curves.push_back(std::move(c));
    for (std::size_t k = 0; k < N; ++k) lead_path.push_back(double(sign[k]) * w[k]);
    for (std::size_t k = 0; k < N; ++k) lead_path.push_back(-double(sign[k]) * w[k]);
  } else {
    std::vector<Complex> cp, cm;
    for (auto& s : rep.samples) cp.push_back(s.plus), cm.push_back(s.minus);
    curves.push_back(std::move(cp));
    curves.push_back(std::move(cm));
  }
  if (rep.regime != LoopRegime::On)
    for (auto& c : curves) rep.winding.push_back(winding_number(c, m.lambda0));

  auto count = [&](const std::vector<Complex>& path) {
    std::vector<double> re, im;
    for (auto z : path) re.push_back(z.real()), im.push_back(z.imag());
    rep.re_axis_sign_changes += cyclic_sign_changes(re);
    rep.im_axis_sign_changes += cyclic_sign_changes(im);
  };
  if (rep.branches_swap) {
    count(lead_path);
  } else {
    std::vector<Complex> p, q;
    for (std::size_t k = 0; k < N; ++k) p.push_back(double(sign[k]) * w[k]), q.push_back(-double(sign[k]) * w[k]);
    count(p);
    count(q);
  }

  // Closed-loop quartic on the leading-order offsets.
  const double scale = rep.K * rep.K * r2;
  for (std::size_t k = 0; k < N; ++k) {
    const double x = w[k].real(), y = w[k].imag();
    const double e1 = g1 * (x * x - y * y) - 2.0 * f1 * x * y - b * rep.K;
    const double e2 = g2 * (x * x - y * y) - 2.0 * f2 * x * y - a * (f1 * g2 - g1 * f2);
    const double res = std::abs(e1 * e1 + e2 * e2 - scale);
    rep.quartic_residual = std::max(rep.quartic_residual, scale > 0.0 ? res / scale : res);
  }
  return rep;
}

}  // namespace eigcouple
