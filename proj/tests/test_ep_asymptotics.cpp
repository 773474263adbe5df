#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "eigcouple/crystal_optics.hpp"
#include "eigcouple/ep_asymptotics.hpp"

using namespace eigcouple;

namespace {

const Complex I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

EPLocalModel model(RealVector f, RealVector g, RealVector h, RealVector r, Complex l0 = 0.0) {
  EPLocalModel m;
  m.p0 = RealVector(f.size(), 0.0);
  m.lambda0 = l0;
  m.f = std::move(f), m.g = std::move(g), m.h = std::move(h), m.r = std::move(r);
  return m;
}

// Hand-entered first-order data of the first crystal example.
EPLocalModel example1_model() { return model({0, 4}, {-4, 0}, {0, 0}, {-4, 0}, 2.0); }

EPLocalModel example1_pipeline() {
  const MatrixFamily fam = *builtin_family("crystal-example-1");
  const RealVector p0{0.0, 0.0};
  const CMatrix a = fam.evaluate(p0);
  const auto clusters = find_double_eigenvalues(a);
  REQUIRE(clusters.size() == 1);
  return sensitivities(fam, jordan_chain(a, clusters[0].center), p0);
}

MatrixFamily sqrt_family() {
  PolynomialFamily poly;
  poly.m = 2, poly.n = 2;
  poly.terms.push_back({CMatrix{{0, 1}, {0, 0}}, {0, 0}});
  poly.terms.push_back({CMatrix{{0, 0}, {1, 0}}, {1, 0}});
  poly.terms.push_back({CMatrix{{0, 0}, {I, 0}}, {0, 1}});
  return MatrixFamily::from_polynomial(poly);
}

// Two eigenvalues of a nearest to {p, m}, paired by minimal total distance.
std::array<Complex, 2> paired_exact(const std::vector<Complex>& ev, Complex p, Complex m) {
  double best = INFINITY;
  std::array<Complex, 2> out{};
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = 0; j < ev.size(); ++j) {
      if (i == j) continue;
      const double c = std::abs(ev[i] - p) + std::abs(ev[j] - m);
      if (c < best) best = c, out = {ev[i], ev[j]};
    }
  return out;
}

std::array<double, 2> sorted2(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

TEST_CASE("curve split of [[0,1],[eps,0]]") {
  const JordanChain chain{0.0, {1, 0}, {0, 1}, {0, 1}, {1, 0}};
  const CMatrix a0{{0, 1}, {0, 0}}, a1{{0, 0}, {1, 0}};
  const auto s = curve_split(chain, a0, a1);
  CHECK(std::abs(s.mu1 - 1.0) < 1e-15);
  CHECK(std::abs(s.mu2) < 1e-15);
  const auto l = s.lambda(0.04);
  CHECK(std::abs(l[0] - 0.2) < 1e-15);
  CHECK(std::abs(l[1] + 0.2) < 1e-15);
  const auto ln = s.lambda(-0.04);
  CHECK(std::abs(ln[0] - 0.2 * I) < 1e-15);

  // The expansion is exact here: u = (1, +-sqrt(eps)).
  const auto v = s.vectors(0.04);
  CHECK((v[0] - CVector{1, 0.2}).norm() < 1e-15);
  CHECK((v[1] - CVector{1, -0.2}).norm() < 1e-15);

  const auto z = curve_split(chain, a0, CMatrix(2, 2));
  CHECK(z.mu1 == Complex{});
  CHECK(z.mu2 == Complex{});
  CHECK(z.lambda(0.3)[0] == Complex{});
}

TEST_CASE("curve split on the first crystal example along e1") {
  const MatrixFamily fam = *builtin_family("crystal-example-1");
  const RealVector p0{0.0, 0.0};
  const CMatrix a0 = fam.evaluate(p0);
  const auto chain = jordan_chain(a0, 2.0);
  const auto s = curve_split(chain, a0, fam.derivative(p0, 0));
  CHECK(std::abs(s.mu1 - (-4.0 * I)) < 1e-10);

  // Exact eigenvalues along the curve approach the expansion at order eps^{3/2}.
  auto err = [&](double eps) {
    const auto lam = s.lambda(eps);
    const RealVector p{eps, 0.0};
    const auto ex = paired_exact(eigenvalues(fam.evaluate(p)), lam[0], lam[1]);
    return std::max(std::abs(ex[0] - lam[0]), std::abs(ex[1] - lam[1]));
  };
  CHECK(err(1e-4) < 1e-5);
  CHECK(err(1e-4) / err(4e-4) < 0.2);

  // Eigenvector expansion: residual of order eps^{3/2}.
  auto residual = [&](double eps) {
    const auto v = s.vectors(eps);
    const auto lam = s.lambda(eps);
    const CMatrix a = fam.evaluate(RealVector{eps, 0.0});
    return (a * v[0] - lam[0] * v[0]).norm() / v[0].norm();
  };
  CHECK(residual(1e-6) / residual(1e-4) < 2e-3);
}

TEST_CASE("curve split rejects a singular bordered matrix") {
  // A chain for which u1 v1^* fails to regularize A0 - l0 I.
  const JordanChain bad{0.0, {1, 0}, {0, 1}, {0, 1}, {0, 0}};
  CHECK_THROWS_AS(curve_split(bad, CMatrix{{0, 1}, {0, 0}}, CMatrix{{0, 0}, {1, 0}}), ModelError);
}

TEST_CASE("sensitivity vectors") {
  const auto m = example1_pipeline();
  const RealVector f{0, 4}, g{-4, 0}, h{0, 0}, r{-4, 0};
  for (std::size_t s = 0; s < 2; ++s) {
    CHECK(std::abs(m.f[s] - f[s]) < 1e-8);
    CHECK(std::abs(m.g[s] - g[s]) < 1e-8);
    CHECK(std::abs(m.h[s] - h[s]) < 1e-8);
    CHECK(std::abs(m.r[s] - r[s]) < 1e-8);
  }
  CHECK(std::abs(m.lambda0 - 2.0) < 1e-10);

  const MatrixFamily sq = sqrt_family();
  const RealVector z{0.0, 0.0};
  const JordanChain chain{0.0, {1, 0}, {0, 1}, {0, 1}, {1, 0}};
  const auto ms = sensitivities(sq, chain, z);
  CHECK(ms.f == RealVector{1, 0});
  CHECK(ms.g == RealVector{0, 1});
  CHECK(ms.h == RealVector{0, 0});
  CHECK(ms.r == RealVector{0, 0});
  CHECK_FALSE(ms.degenerate());

  MatrixFamily constant(2, 2, [](std::span<const double>) { return CMatrix{{0, 1}, {0, 0}}; });
  const auto mc = sensitivities(constant, chain, z);
  CHECK(mc.degenerate());
  CHECK(mc.h == RealVector{0, 0});
}

TEST_CASE("surface model of the first crystal example") {
  const auto m = example1_model();
  for (double t : {1e-4, 1e-3, 0.01, 0.09}) {
    RealVector dp{0.0, t};
    auto s = surface_eval(m, dp);
    CHECK(s.re_plus == doctest::Approx(2 + 2 * std::sqrt(t)).epsilon(1e-15));
    CHECK(s.re_minus == doctest::Approx(2 - 2 * std::sqrt(t)).epsilon(1e-15));
    CHECK(std::abs(s.im_plus) == 0.0);
    CHECK(std::abs(s.im_minus) == 0.0);

    dp = {t, 0.0};
    s = surface_eval(m, dp);
    const double q = std::sqrt(2 * t);
    CHECK(std::abs(s.re_plus - (2 + q)) < 1e-15);
    CHECK(std::abs(s.re_minus - (2 - q)) < 1e-15);
    // Plus sheet pairs the larger Re with sign(<g,dp>) = -1 on the Im radical.
    CHECK(std::abs(s.im_plus - (-2 * t - q)) < 1e-15);
    CHECK(std::abs(s.im_minus - (-2 * t + q)) < 1e-15);
  }
  const RealVector zero{0.0, 0.0};
  const auto s0 = surface_eval(m, zero);
  CHECK(s0.plus() == Complex(2.0));
  CHECK(s0.minus() == Complex(2.0));
}

TEST_CASE("surface sheets satisfy the squared relations for random models") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + trial % 4;
    RealVector f(n), g(n), h(n), r(n), dp(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = nd(rng), g[k] = nd(rng), h[k] = nd(rng), r[k] = nd(rng), dp[k] = nd(rng);
    const auto m = model(f, g, h, r, Complex(nd(rng), nd(rng)));
    const auto s = surface_eval(m, dp);
    const double x = s.re_plus - m.lambda0.real() - dot(h, dp) / 2;
    const double y = s.im_plus - m.lambda0.imag() - dot(r, dp) / 2;
    const double scale = std::abs(dot(f, dp)) + std::abs(dot(g, dp)) + 1.0;
    CHECK(std::abs(x * x - y * y - dot(f, dp)) < 1e-12 * scale);
    CHECK(std::abs(2 * x * y - dot(g, dp)) < 1e-12 * scale);
    // Minus sheet is the reflection through the midpoint.
    CHECK(std::abs(s.re_plus + s.re_minus - 2 * (m.lambda0.real() + dot(h, dp) / 2)) < 1e-12 * (1 + std::abs(s.re_plus)));
  }
}

TEST_CASE("exact eigenvalues converge to the surface model with a 3/2-order remainder") {
  const MatrixFamily fam = *builtin_family("crystal-example-1");
  const auto m = example1_model();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  for (int trial = 0; trial < 10; ++trial) {
    const double th = ang(rng);
    auto err = [&](double eps) {
      const RealVector dp{eps * std::cos(th), eps * std::sin(th)};
      const auto s = surface_eval(m, dp);
      const auto ex = paired_exact(eigenvalues(fam.evaluate(dp)), s.plus(), s.minus());
      return std::max(std::abs(ex[0] - s.plus()), std::abs(ex[1] - s.minus()));
    };
    for (double eps : {1e-2, 1e-3, 1e-4}) CHECK(err(eps / 4) <= 0.45 * err(eps));
  }
}

TEST_CASE("tangency functionals") {
  const auto m = example1_model();
  const RealVector e1{1.0, 0.0}, z{0.0, 0.0};
  const auto t = tangency_conditions(m, e1);
  CHECK(t.f_dp == 0.0);
  CHECK(t.g_dp == -4.0);
  const auto t0 = tangency_conditions(m, z);
  CHECK(t0.f_dp == 0.0);
  CHECK(t0.g_dp == 0.0);

  const RealVector f{1.0, 2.0, -0.5}, g{0.3, -1.0, 2.0};
  const RealVector cross{f[1] * g[2] - f[2] * g[1], f[2] * g[0] - f[0] * g[2], f[0] * g[1] - f[1] * g[0]};
  const auto t3 = tangency_conditions(model(f, g, {0, 0, 0}, {0, 0, 0}), cross);
  CHECK(std::abs(t3.f_dp) < 1e-15);
  CHECK(std::abs(t3.g_dp) < 1e-15);
}

TEST_CASE("branch cuts") {
  const auto cuts = branch_cuts(example1_model());
  REQUIRE(cuts.re_cut.ray);
  REQUIRE(cuts.im_cut.ray);
  CHECK(std::abs((*cuts.re_cut.ray)[0]) < 1e-15);
  CHECK((*cuts.re_cut.ray)[1] == doctest::Approx(-1.0));
  CHECK((*cuts.im_cut.ray)[1] == doctest::Approx(1.0));
  CHECK(cuts.re_cut.f_sign == -cuts.im_cut.f_sign);
  const RealVector down{0.0, -0.3}, up{0.0, 0.3}, side{0.3, 0.0};
  CHECK(cuts.re_cut.contains(down, 1e-12));
  CHECK_FALSE(cuts.re_cut.contains(up, 1e-12));
  CHECK(cuts.im_cut.contains(up, 1e-12));
  CHECK_FALSE(cuts.im_cut.contains(side, 1e-12));
  CHECK(cuts.re_cut.level == RealVector{0, 0});
  CHECK(cuts.im_cut.level == RealVector{-2, 0});

  const auto c2 = branch_cuts(model({1, 0}, {0, 1}, {0, 0}, {0, 0}));
  CHECK((*c2.re_cut.ray)[0] == doctest::Approx(-1.0));
  CHECK((*c2.im_cut.ray)[0] == doctest::Approx(1.0));
  CHECK(c2.re_cut.level == RealVector{0, 0});
  CHECK(c2.im_cut.level == RealVector{0, 0});

  CHECK_THROWS_AS(branch_cuts(model({1, 0}, {0, 0}, {0, 0}, {0, 0})), ModelError);
}

TEST_CASE("exact Re sheets glue along the re cut") {
  const MatrixFamily fam = *builtin_family("crystal-example-1");
  const auto ray = *branch_cuts(example1_model()).re_cut.ray;
  std::vector<double> t, d;
  for (double rad : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}) {
    const RealVector p{rad * ray[0], rad * ray[1]};
    auto ev = eigenvalues(fam.evaluate(p));
    std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return std::abs(a - 2.0) < std::abs(b - 2.0); });
    t.push_back(rad);
    d.push_back(std::abs(ev[0].real() - ev[1].real()));
    // Im parts do split at order sqrt(rad) on this ray.
    CHECK(std::abs(ev[0].imag() - ev[1].imag()) > std::sqrt(rad));
  }
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(d[k] <= 0.1 * std::pow(t[k], 0.9));
}

TEST_CASE("complex-plane conic") {
  const auto m = example1_model();
  const RealVector zero{0.0};
  const auto c0 = complex_plane_conic(m, zero);
  CHECK(c0.gamma == 0.0);
  CHECK(c0.degenerate);
  CHECK(c0.asymptote_slopes[0] * c0.asymptote_slopes[1] == doctest::Approx(-1.0));

  const double delta = 0.01;
  const RealVector fixed{delta};
  const auto c = complex_plane_conic(m, fixed);
  CHECK(c.gamma == doctest::Approx(-16 * delta));
  CHECK_FALSE(c.degenerate);
  // Leading-order offsets along the p1 sweep lie on the conic.
  for (double t = -0.1; t <= 0.1; t += 0.01) {
    const RealVector dp{t, delta};
    const Complex w = leading_offset(m, dp);
    const double x = w.real(), y = w.imag();
    const double q = c.quadratic[0] * x * x + c.quadratic[1] * x * y + c.quadratic[2] * y * y;
    CHECK(q == doctest::Approx(c.gamma).epsilon(1e-12));
    const double g1 = m.g[0], f1 = m.f[0];
    const double hyp = std::pow(g1 * x - f1 * y, 2) - (f1 * f1 + g1 * g1) * y * y;
    CHECK(hyp == doctest::Approx(c.hyperbola_rhs).epsilon(1e-12));
  }
  // Vertices lie on the curve; flipping gamma keeps the asymptotes and rotates the vertex axis.
  for (const auto& v : c.vertices) {
    const double q = c.quadratic[0] * v[0] * v[0] + c.quadratic[1] * v[0] * v[1] + c.quadratic[2] * v[1] * v[1];
    CHECK(q == doctest::Approx(c.gamma).epsilon(1e-12));
  }
  const RealVector flipped{-delta};
  const auto cf = complex_plane_conic(m, flipped);
  CHECK(cf.gamma == doctest::Approx(16 * delta));
  CHECK(cf.asymptotes == c.asymptotes);
  CHECK(std::abs(cf.vertex_axis[0] * c.vertex_axis[0] + cf.vertex_axis[1] * c.vertex_axis[1]) < 1e-15);

  // Asymptotes of a generic model are perpendicular.
  const auto cg = complex_plane_conic(model({0.7, -1.3}, {2.1, 0.4}, {0, 0}, {0, 0}), fixed);
  CHECK(cg.asymptote_slopes[0] * cg.asymptote_slopes[1] == doctest::Approx(-1.0));

  CHECK_THROWS_AS(complex_plane_conic(model({1, 0}, {0, 1}, {0, 0}, {0, 0}), fixed), ChartError);
}

TEST_CASE("cross-section: double cusp of the first crystal example") {
  const auto m = example1_model();
  const RealVector zero{0.0};
  const auto s = cross_section(m, zero);
  CHECK(s.crossing == SectionCrossing::Cusp);
  CHECK(s.vertical_tangents);
  CHECK(s.p1_cross_offset == 0.0);
  CHECK(s.re_level == 2.0);
  CHECK(s.im_level == 0.0);
  REQUIRE(s.cusp_re_coeffs);
  REQUIRE(s.cusp_im_coeffs);
  // f1 = 0, g1 = -4: Re dl = +-sqrt(2|s1|) on both sides.
  for (double t : {-0.02, -0.005, 0.005, 0.02}) {
    const RealVector dp{t, 0.0};
    const auto e = surface_eval(m, dp);
    const auto& k = *s.cusp_re_coeffs;
    const double kk = t > 0 ? std::max(k[0], k[1]) : std::min(k[0], k[1]);
    CHECK(std::abs(e.re_plus - 2.0 - std::sqrt(kk * t)) < 1e-15);
    CHECK(std::abs(e.re_plus - 2.0 - std::sqrt(2 * std::abs(t))) < 1e-15);
    const auto& ki = *s.cusp_im_coeffs;
    const double kki = t > 0 ? std::max(ki[0], ki[1]) : std::min(ki[0], ki[1]);
    CHECK(std::abs(std::abs(e.im_plus - m.r[0] * t / 2) - std::sqrt(kki * t)) < 1e-15);
  }
}

TEST_CASE("cross-section tangents agree with finite differences of the sheets") {
  for (double delta : {0.01, -0.01}) {
    const auto m = example1_model();
    const RealVector fixed{delta};
    const auto s = cross_section(m, fixed);
    CHECK(s.gamma == doctest::Approx(-16 * delta));
    const double x0 = s.p1_cross_offset;
    const double h = 1e-7;
    const bool im = s.crossing == SectionCrossing::Im;
    CHECK(im == (delta > 0));  // <f,dp> = 4 delta at the crossing
    const auto slopes = im ? *s.im_slopes : *s.re_slopes;
    CHECK_FALSE((im ? s.re_slopes : s.im_slopes).has_value());
    const auto expect = sorted2(slopes[0], slopes[1]);
    for (double side : {1.0, -1.0}) {
      const RealVector dp{x0 + side * h, delta};
      const auto e = surface_eval(m, dp);
      const double lvl = im ? s.im_level : s.re_level;
      const double a = ((im ? e.im_plus : e.re_plus) - lvl) / (side * h);
      const double b = ((im ? e.im_minus : e.re_minus) - lvl) / (side * h);
      const auto got = sorted2(a, b);
      CHECK(got[0] == doctest::Approx(expect[0]).epsilon(1e-4));
      CHECK(got[1] == doctest::Approx(expect[1]).epsilon(1e-4));
    }
  }
}

TEST_CASE("cross-section of a three-parameter model") {
  // g1 != 0 is required for the section; the swept parameter carries g.
  const auto m = model({0, 0, 1}, {1, 0, 0}, {0.2, 0.1, -0.3}, {0.5, -0.4, 0.7}, Complex(1.0, -1.0));
  const RealVector fixed{0.0, 0.01};
  const auto s = cross_section(m, fixed);
  CHECK(s.p1_cross_offset == 0.0);
  CHECK(s.gamma == doctest::Approx(0.01));
  CHECK(s.crossing == SectionCrossing::Im);
  // Levels are the sheet midpoints at the crossing, where the Im sheets meet.
  const RealVector dp{s.p1_cross_offset, 0.0, 0.01};
  const auto e = surface_eval(m, dp);
  CHECK(e.im_plus == doctest::Approx(e.im_minus).epsilon(1e-15));
  CHECK(s.im_level == doctest::Approx(e.im_plus).epsilon(1e-15));
  CHECK(s.re_level == doctest::Approx((e.re_plus + e.re_minus) / 2).epsilon(1e-15));

  // With g2 != 0 the crossing moves off p1^0.
  const auto m2 = model({0.3, 0.5, 1}, {2, -1, 0.5}, {0.2, 0.1, -0.3}, {0.5, -0.4, 0.7});
  const RealVector fixed2{0.02, 0.01};
  const auto s2 = cross_section(m2, fixed2);
  CHECK(s2.p1_cross_offset == doctest::Approx(-(-1 * 0.02 + 0.5 * 0.01) / 2));
  const RealVector dp2{s2.p1_cross_offset, 0.02, 0.01};
  CHECK(std::abs(tangency_conditions(m2, dp2).g_dp) < 1e-15);
  const auto e2 = surface_eval(m2, dp2);
  CHECK(s2.re_level == doctest::Approx((e2.re_plus + e2.re_minus) / 2).epsilon(1e-14));
  CHECK(s2.im_level == doctest::Approx((e2.im_plus + e2.im_minus) / 2).epsilon(1e-14));

  const RealVector z2{0.0, 0.0};
  const auto sz = cross_section(model({0, 1, 0}, {1, 0, 0}, {0, 0, 0}, {0, 0, 0}, 3.0), z2);
  CHECK(sz.re_level == 3.0);
  CHECK(sz.im_level == 0.0);

  CHECK_THROWS_AS(cross_section(model({1, 0, 0}, {0, 1, 0}, {0, 0, 0}, {0, 0, 0}), fixed), ChartError);

  const auto samples = sample_cross_section(m, fixed, -0.1, 0.1, 5);
  REQUIRE(samples.size() == 5);
  CHECK(samples.front().p1 == -0.1);
  CHECK(samples.back().p1 == 0.1);
}

TEST_CASE("loop inside the EP: one encircling curve crossing both axes") {
  const auto m = example1_model();
  const double r = 0.01;
  const auto rep = loop_trajectory(m, {0.0, 0.0, r, 720});
  CHECK(rep.regime == LoopRegime::Inside);
  CHECK(rep.branches_swap);
  REQUIRE(rep.winding.size() == 1);
  CHECK(rep.winding[0] == 1);
  CHECK(rep.samples.size() == 720);
  CHECK(rep.K == -16.0);

  int re_axis = 0, im_axis = 0;
  for (const auto& c : rep.crossings) {
    if (c.axis == 'r') {
      ++re_axis;
      CHECK(std::abs(std::abs(c.im_offset) - 2 * std::sqrt(r)) <= 1e-12);
      CHECK(c.phi == doctest::Approx(1.5 * kPi));  // loop point s = (0, -r)
    } else {
      ++im_axis;
      CHECK(std::abs(std::abs(c.re_offset) - 2 * std::sqrt(r)) <= 1e-12);
    }
  }
  CHECK(re_axis == 2);
  CHECK(im_axis == 2);
  REQUIRE(rep.formula_im_sq.size() == 1);
  CHECK(rep.formula_im_sq[0] == doctest::Approx(4 * r).epsilon(1e-14));
  REQUIRE(rep.formula_re_sq.size() == 1);
  CHECK(rep.formula_re_sq[0] == doctest::Approx(4 * r).epsilon(1e-14));
  CHECK(rep.re_axis_sign_changes == 2);
  CHECK(rep.im_axis_sign_changes == 2);
  CHECK(rep.quartic_residual < 1e-12);

  // Branch tracking is continuous: consecutive samples stay close compared to the split.
  for (std::size_t k = 1; k < rep.samples.size(); ++k)
    CHECK(std::abs(rep.samples[k].plus - rep.samples[k - 1].plus) <
          0.1 * std::abs(rep.samples[k].plus - rep.samples[k].minus));
}

TEST_CASE("loops outside the EP: kidneys and the sigma rule") {
  const auto m = example1_model();
  const double r = 0.01;

  const auto far = loop_trajectory(m, {0.02, 0.0, r});
  CHECK(far.regime == LoopRegime::Outside);
  CHECK_FALSE(far.branches_swap);
  CHECK(far.winding == std::vector<int>{0, 0});
  CHECK(far.sigma == 0.0);
  CHECK(far.crossings.empty());

  // sigma < 0: each kidney crosses Re l = Re l0 twice.
  const auto below = loop_trajectory(m, {0.0, -0.02, r});
  CHECK(below.sigma < 0.0);
  CHECK(below.winding == std::vector<int>{0, 0});
  CHECK(below.crossings.size() == 4);
  for (const auto& c : below.crossings) CHECK(c.axis == 'r');
  CHECK(below.re_axis_sign_changes == 4);
  CHECK(below.im_axis_sign_changes == 0);
  CHECK(below.formula_im_sq.size() == 2);
  CHECK(below.formula_re_sq.empty());

  const auto above = loop_trajectory(m, {0.0, 0.02, r});
  CHECK(above.sigma > 0.0);
  std::vector<double> xs;
  for (const auto& c : above.crossings) {
    CHECK(c.axis == 'i');
    xs.push_back(std::abs(c.re_offset));
  }
  std::sort(xs.begin(), xs.end());
  REQUIRE(xs.size() == 4);
  CHECK(xs[0] == doctest::Approx(0.2));
  CHECK(xs[3] == doctest::Approx(std::sqrt(0.12)));
  CHECK(above.im_axis_sign_changes == 4);
  CHECK(above.re_axis_sign_changes == 0);

  // Random models: the crossed axis always follows sign(sigma).
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    const auto mr = model({nd(rng), nd(rng)}, {nd(rng), nd(rng)}, {0, 0}, {0, 0});
    const double th = 2 * kPi * (trial / 200.0);
    const double dist = 1.5 + std::abs(nd(rng));
    const auto rep = loop_trajectory(mr, {dist * std::cos(th), dist * std::sin(th), 1.0});
    for (const auto& c : rep.crossings) CHECK(c.axis == (rep.sigma < 0 ? 'r' : 'i'));
    CHECK(rep.quartic_residual < 1e-9);
  }
}

TEST_CASE("loop through the EP, tiny loops and argument errors") {
  const auto m = example1_model();
  CHECK(loop_trajectory(m, {0.01, 0.0, 0.01}).regime == LoopRegime::On);

  const auto tiny = loop_trajectory(m, {0.0, 0.0, 1e-14});
  for (const auto& s : tiny.samples) CHECK(std::abs(s.plus - 2.0) < 1e-6);

  CHECK_THROWS_AS(loop_trajectory(m, {0.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(loop_trajectory(m, {0.0, 0.0, 0.01, 15}), DomainError);
  CHECK_THROWS_AS(loop_trajectory(model({1, 0, 0}, {0, 1, 0}, {0, 0, 0}, {0, 0, 0}), {0, 0, 1}), DimensionError);
  // A loop grazing the EP with few samples cannot be tracked.
  CHECK_THROWS_AS(loop_trajectory(m, {0.0, 0.009, 0.01, 16}), ResolutionError);
  CHECK_NOTHROW(loop_trajectory(m, {0.0, 0.009, 0.01, 720}));
}
