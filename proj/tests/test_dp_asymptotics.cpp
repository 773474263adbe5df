#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "eigcouple/crystal_optics.hpp"
#include "eigcouple/dp_asymptotics.hpp"
#include "synthetic_models.hpp"
#include "test_support.hpp"

using namespace eigcouple;
using namespace eigcouple::testing;

namespace {

const Complex I{0.0, 1.0};
const Complex kL0{1.0, 5.0};

struct Example2 {
  MatrixFamily fam = *builtin_family("crystal-example-2");
  RealVector p0{0.0, 0.0};
  CMatrix a = fam.evaluate(p0);
  DPFrame pinned = dp_frame_with(a, kL0, CVector{1, 0, 0}, CVector{0, 1, 0});
  DPLocalModel model = dp_sensitivities(fam, pinned, p0);
};

DPLocalModel reference_model() {
  DPLocalModel m;
  m.p0 = {0.0, 0.0};
  m.lambda0 = kL0;
  m.d11 = {-2.0 - 8.0 * I, 0.0};
  m.d12 = {6.0 * I, -9.0 - 4.0 * I};
  m.d21 = {-10.0 * I, 7.0 - 4.0 * I};
  m.d22 = {0.0, -4.0 * I};
  return m;
}

double cabs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - b[k]));
  return e;
}

DPFrame coordinate_frame(Complex l0) { return {l0, {1, 0}, {0, 1}, {1, 0}, {0, 1}}; }

}  // namespace

TEST_CASE("reduced problem: diagonal, swap and the second crystal example") {
  const auto rp = reduced_problem(CMatrix{{3, 0}, {0, 1}}, coordinate_frame(0.0));
  CHECK(rp.mu_plus == Complex(3.0));
  CHECK(rp.mu_minus == Complex(1.0));
  CHECK(std::abs(rp.coeff_plus[0] - 1.0) < 1e-15);
  CHECK(std::abs(rp.coeff_plus[1]) < 1e-15);
  CHECK(std::abs(rp.coeff_minus[1] - 1.0) < 1e-15);

  const auto sw = reduced_problem(CMatrix{{0, 1}, {1, 0}}, coordinate_frame(0.0));
  CHECK(std::abs(sw.mu_plus - 1.0) < 1e-15);
  CHECK(std::abs(sw.mu_minus + 1.0) < 1e-15);

  const Example2 ex;
  const auto r2 = reduced_problem(ex.fam.derivative(ex.p0, 0), ex.pinned);
  const CMatrix expect{{-2.0 - 8.0 * I, -10.0 * I}, {6.0 * I, 0.0}};
  CHECK(max_abs_diff(r2.matrix(), expect) < 1e-12);
  auto ev = eigenvalues(expect);
  const auto mu = std::vector<Complex>{r2.mu_plus, r2.mu_minus};
  CHECK(std::min(std::abs(ev[0] - mu[0]) + std::abs(ev[1] - mu[1]), std::abs(ev[0] - mu[1]) + std::abs(ev[1] - mu[0])) <
        1e-12);
}

TEST_CASE("reduced problem eigenpairs on random instances") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const CMatrix a1 = random_matrix(2, rng);
    const auto rp = reduced_problem(a1, coordinate_frame(0.0));
    const auto ev = eig_all(rp.matrix()).values();
    const double d = std::min(std::abs(ev[0] - rp.mu_plus) + std::abs(ev[1] - rp.mu_minus),
                              std::abs(ev[0] - rp.mu_minus) + std::abs(ev[1] - rp.mu_plus));
    CHECK(d < 1e-12);
    const CMatrix m = rp.matrix();
    // Trace and determinant identities.
    CHECK(std::abs(rp.mu_plus + rp.mu_minus - (m(0, 0) + m(1, 1))) < 1e-12);
    CHECK(std::abs(rp.mu_plus * rp.mu_minus - (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0))) < 1e-12);
    for (const auto& [mu, x] : {std::pair{rp.mu_plus, rp.coeff_plus}, std::pair{rp.mu_minus, rp.coeff_minus}}) {
      const CVector v{x[0], x[1]};
      CHECK((m * v - mu * v).norm() < 1e-12);
      CHECK(v.norm() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("d-vectors of the second crystal example under the pinned frame") {
  const Example2 ex;
  const auto ref = reference_model();
  CHECK(cabs_diff(ex.model.d11, ref.d11) < 1e-8);
  CHECK(cabs_diff(ex.model.d12, ref.d12) < 1e-8);
  CHECK(cabs_diff(ex.model.d21, ref.d21) < 1e-8);
  CHECK(cabs_diff(ex.model.d22, ref.d22) < 1e-8);

  MatrixFamily constant(2, 1, [](std::span<const double>) { return CMatrix{{1, 0}, {0, 1}}; });
  const RealVector z{0.0};
  const auto mc = dp_sensitivities(constant, coordinate_frame(1.0), z);
  CHECK(mc.d11 == std::vector<Complex>{0.0});
  CHECK(mc.d21 == std::vector<Complex>{0.0});

  MatrixFamily herm(2, 1, [](std::span<const double> p) { return CMatrix{{p[0], 0}, {0, -p[0]}}; });
  const auto mh = dp_sensitivities(herm, coordinate_frame(0.0), z);
  CHECK(std::abs(mh.d11[0] - 1.0) < 1e-9);
  CHECK(std::abs(mh.d22[0] + 1.0) < 1e-9);
  CHECK(std::abs(mh.d12[0]) < 1e-12);
  CHECK(std::abs(mh.d21[0]) < 1e-12);
}

TEST_CASE("split of the second crystal example") {
  const auto m = reference_model();
  const RealVector zero{0.0, 0.0};
  const auto s0 = split_multiparam(m, zero);
  CHECK(s0.lambda_plus == kL0);
  CHECK(s0.lambda_minus == kL0);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int k = 0; k < 500; ++k) {
    const double s1 = u(rng), s2 = u(rng);
    const RealVector dp{s1, s2};
    const auto s = split_multiparam(m, dp);
    const Complex c = (45.0 + 8.0 * I) * (s1 * s1) + 128.0 * I * (s1 * s2) + (-83.0 + 8.0 * I) * (s2 * s2);
    CHECK(std::abs(s.c - c) <= 1e-14 * (1 + std::abs(c)));
    // Radicands compared squared: the closed forms cancel when Re c and |c| nearly offset.
    const double ca = std::abs(c), tol = 1e-14 * (1 + ca);
    const double x = s.re_plus - (1 - s1), y = s.im_plus - (5 - 4 * s1 - 2 * s2);
    CHECK(std::abs(x * x - (ca + c.real()) / 2) < tol);
    CHECK(std::abs(y * y - (ca - c.real()) / 2) < tol);
    CHECK(x >= 0.0);
    CHECK((y == 0.0 || (y > 0) == (c.imag() > 0)));  // Im radical carries sign(Im c)
    CHECK(std::abs(s.re_plus + s.re_minus - 2 * (1 - s1)) < 1e-14);
    CHECK(std::abs(s.im_plus + s.im_minus - 2 * (5 - 4 * s1 - 2 * s2)) < 1e-14);
  }

  // d12 = d21 = 0 with a real diagonal difference leaves c >= 0.
  DPLocalModel r;
  r.p0 = {0, 0};
  r.lambda0 = 0.0;
  r.d11 = {1.0 + 2.0 * I, 0.5};
  r.d22 = {-1.0 + 2.0 * I, 3.0};
  r.d12 = r.d21 = {0.0, 0.0};
  for (int k = 0; k < 50; ++k) {
    const RealVector dp{u(rng), u(rng)};
    const auto s = split_multiparam(r, dp);
    CHECK(s.c.imag() == 0.0);
    CHECK(s.c.real() >= 0.0);
  }
}

TEST_CASE("observables are invariant under a change of DP frame") {
  const Example2 ex;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix t = random_matrix(2, rng) + 2.0 * CMatrix::identity(2);
    const CVector u1 = t(0, 0) * ex.pinned.u1 + t(1, 0) * ex.pinned.u2;
    const CVector u2 = t(0, 1) * ex.pinned.u1 + t(1, 1) * ex.pinned.u2;
    const auto frame = dp_frame_with(ex.a, kL0, u1, u2);
    const auto m = dp_sensitivities(ex.fam, frame, ex.p0);
    const auto s = surface_classification_2p(m);
    CHECK(std::abs(s.c11 - (45.0 + 8.0 * I)) < 1e-8);
    CHECK(std::abs(s.c12 - 128.0 * I) < 1e-8);
    CHECK(std::abs(s.c22 - (-83.0 + 8.0 * I)) < 1e-8);
    for (int k = 0; k < 5; ++k) {
      const RealVector dp{u(rng), u(rng)};
      const auto a = split_multiparam(m, dp), b = split_multiparam(ex.model, dp);
      CHECK(std::abs(a.c - b.c) < 1e-10);
      CHECK(std::abs(a.lambda_plus - b.lambda_plus) < 1e-10);
      CHECK(std::abs(a.lambda_minus - b.lambda_minus) < 1e-10);
      // Trace of the reduced problem.
      CHECK(std::abs(cdot(m.d11, dp) + cdot(m.d22, dp) - cdot(ex.model.d11, dp) - cdot(ex.model.d22, dp)) < 1e-10);
    }
  }
}

TEST_CASE("exact eigenvalues of the second crystal example are o(|ds|) from the model") {
  const Example2 ex;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
  for (int trial = 0; trial < 10; ++trial) {
    const double th = ang(rng);
    auto err = [&](double rho) {
      const RealVector dp{rho * std::cos(th), rho * std::sin(th)};
      const auto s = split_multiparam(ex.model, dp);
      auto ev = eigenvalues(ex.fam.evaluate(dp));
      std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return std::abs(a - kL0) < std::abs(b - kL0); });
      return std::min(std::max(std::abs(ev[0] - s.lambda_plus), std::abs(ev[1] - s.lambda_minus)),
                      std::max(std::abs(ev[1] - s.lambda_plus), std::abs(ev[0] - s.lambda_minus)));
    };
    for (double rho : {1e-2, 1e-3, 1e-4}) CHECK(err(rho / 4) <= 0.3 * err(rho));
  }
}

TEST_CASE("persistence conditions") {
  const auto m = reference_model();
  const RealVector z{0.0, 0.0}, e1{1.0, 0.0};
  const auto p0 = persistence_conditions(m, z);
  CHECK(p0.re_c == 0.0);
  CHECK(p0.im_c == 0.0);
  for (double r : p0.residuals) CHECK(r == 0.0);
  const auto p1 = persistence_conditions(m, e1);
  CHECK(p1.re_c == doctest::Approx(45.0));
  CHECK(p1.im_c == doctest::Approx(8.0));

  // All d-vectors parallel to (1, -2): dp = (2, 1) kills every pairing.
  DPLocalModel par;
  par.p0 = {0, 0};
  par.d11 = {1.0 + I, -2.0 - 2.0 * I};
  par.d22 = {3.0, -6.0};
  par.d12 = {-I, 2.0 * I};
  par.d21 = {0.5, -1.0};
  const RealVector k{2.0, 1.0};
  const auto pk = persistence_conditions(par, k);
  for (double r : pk.residuals) CHECK(r == 0.0);
  CHECK(pk.re_c == 0.0);
  CHECK(pk.im_c == 0.0);
}

TEST_CASE("one-parameter slopes") {
  const auto m = reference_model();
  const auto s = one_param_slopes(m);
  // ((d11 - d22)/2)^2 + d12 d21 = (-1-4i)^2 + 60 = 45+8i, the c11 coefficient.
  const Complex root = std::sqrt(45.0 + 8.0 * I);
  CHECK(std::abs(s[0] - (-1.0 - 4.0 * I + root)) < 1e-13);
  CHECK(std::abs(s[1] - (-1.0 - 4.0 * I - root)) < 1e-13);

  DPLocalModel d;
  d.d11 = {2.0 + I};
  d.d22 = {-3.0};
  d.d12 = {0.0};
  d.d21 = {0.0};
  const auto sd = one_param_slopes(d);
  CHECK(sd[0] == 2.0 + I);
  CHECK(sd[1] == Complex(-3.0));
  d.d22 = d.d11;
  d.d12 = {2.0};
  d.d21 = {0.5};
  const auto se = one_param_slopes(d);
  CHECK(std::abs(se[0] - (3.0 + I)) < 1e-15);
  CHECK(std::abs(se[1] - (1.0 + I)) < 1e-15);

  // Agreement with the reduced problem for the corresponding A1.
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix a1 = random_matrix(2, rng);
    DPLocalModel r;
    r.d11 = {a1(0, 0)};
    r.d21 = {a1(0, 1)};
    r.d12 = {a1(1, 0)};
    r.d22 = {a1(1, 1)};
    const auto sl = one_param_slopes(r);
    const auto rp = reduced_problem(a1, coordinate_frame(0.0));
    CHECK(std::abs(sl[0] - rp.mu_plus) < 1e-12);
    CHECK(std::abs(sl[1] - rp.mu_minus) < 1e-12);
  }
}

TEST_CASE("avoided crossing of the second crystal example at ds2 = 0.01") {
  const auto m = reference_model();
  const RealVector rest{0.01};
  const auto rep = avoided_crossing_1p(m, rest);
  CHECK(std::abs(rep.c2 - (45.0 + 8.0 * I)) < 1e-13);
  CHECK(std::abs(rep.c1 - 1.28 * I) < 1e-13);
  CHECK(std::abs(rep.c0 - (-83.0 + 8.0 * I) * 1e-4) < 1e-15);
  CHECK(rep.D == doctest::Approx(1.28 * 1.28 - 4 * 8e-4 * 8));
  CHECK(rep.scenario == CrossingScenario::OneReOneIm);

  const auto brute = brute_force_scenario(dp_family_from_model(m), 0.01, 0.5);
  CHECK(brute.label == "one-re-one-im");
  REQUIRE(brute.roots.size() == 2);
  const auto roots = std::array<double, 2>{std::min(*rep.dp1_a, *rep.dp1_b), std::max(*rep.dp1_a, *rep.dp1_b)};
  CHECK(roots[0] == doctest::Approx(brute.roots[0]).epsilon(1e-8));
  CHECK(roots[1] == doctest::Approx(brute.roots[1]).epsilon(1e-8));

  // Where Re c < 0 at a root the Re sheets meet; where Re c > 0 the Im sheets do.
  for (auto [x, cv] : {std::pair{*rep.dp1_a, *rep.c_a}, std::pair{*rep.dp1_b, *rep.c_b}}) {
    const RealVector dp{x, 0.01};
    const auto s = split_multiparam(m, dp);
    if (cv < 0)
      CHECK(std::abs(s.re_plus - s.re_minus) < 1e-12);
    else
      CHECK(std::abs(s.im_plus - s.im_minus) < 1e-12);
  }
}

TEST_CASE("avoided crossing: constructed factorization and degenerate cases") {
  // Im c = dp1^2 + 0.01 dp1 - 2e-4 = (dp1 - 0.01)(dp1 + 0.02) at delta = 0.01.
  const auto m = dp_model_from_quadratic(3.0 + I, 0.5 + I, 1.0 - 2.0 * I);
  const RealVector rest{0.01};
  const auto rep = avoided_crossing_1p(m, rest);
  REQUIRE(rep.dp1_a);
  const auto roots = std::array<double, 2>{std::min(*rep.dp1_a, *rep.dp1_b), std::max(*rep.dp1_a, *rep.dp1_b)};
  CHECK(roots[0] == doctest::Approx(-0.02).epsilon(1e-12));
  CHECK(roots[1] == doctest::Approx(0.01).epsilon(1e-12));

  DPLocalModel real;
  real.d11 = {1.0, 2.0};
  real.d22 = {-1.0, 0.5};
  real.d12 = {0.3, 1.0};
  real.d21 = {2.0, -1.0};
  const auto dr = avoided_crossing_1p(real, rest);
  CHECK(dr.scenario == CrossingScenario::Degenerate);
  CHECK_FALSE(dr.note.empty());

  const RealVector zero{0.0};
  CHECK(avoided_crossing_1p(m, zero).scenario == CrossingScenario::Degenerate);

  // Im c2 = 0 but Im c1 != 0: one linear root.
  const auto lin = dp_model_from_quadratic(2.0, I, -1.0);
  const auto rl = avoided_crossing_1p(lin, rest);
  CHECK(rl.scenario == CrossingScenario::Degenerate);
  REQUIRE(rl.dp1_a);
  CHECK(std::abs(*rl.dp1_a) < 1e-15);
  CHECK_FALSE(rl.dp1_b);
}

TEST_CASE("avoided crossing scenarios of four constructed families") {
  struct Case {
    Complex q11, q12, q22;
    CrossingScenario expect;
  };
  const Case cases[] = {
      {1.0 + I, 0.0, 1.0 + I, CrossingScenario::NoCrossing},
      {I, 2.0, -I, CrossingScenario::OneReOneIm},
      {-1.0 + I, 0.0, -1.0 - I, CrossingScenario::TwoRe},
      {1.0 + I, 0.0, 1.0 - I, CrossingScenario::TwoIm},
  };
  for (const auto& c : cases) {
    const auto m = dp_model_from_quadratic(c.q11, c.q12, c.q22, Complex(0.5, -0.25));
    const MatrixFamily fam = dp_family_from_model(m);
    // The pipeline recovers the model from the family.
    const RealVector p0{0.0, 0.0};
    const auto recovered = dp_sensitivities(fam, dp_frame(fam.evaluate(p0), m.lambda0), p0);
    const RealVector rest{0.01};
    const auto rep = avoided_crossing_1p(recovered, rest);
    CHECK(rep.scenario == c.expect);
    const auto brute = brute_force_scenario(fam, 0.01, 0.2);
    CHECK(brute.label == std::string(to_string(rep.scenario)));
  }
}

TEST_CASE("two-parameter surface types") {
  const auto ex = surface_classification_2p(reference_model());
  CHECK(std::abs(ex.c11 - (45.0 + 8.0 * I)) < 1e-13);
  CHECK(std::abs(ex.c12 - 128.0 * I) < 1e-13);
  CHECK(std::abs(ex.c22 - (-83.0 + 8.0 * I)) < 1e-13);
  CHECK(ex.D_prime == doctest::Approx(16128.0));
  CHECK(ex.type == SurfaceType::OneReOneImLine);
  CHECK(ex.gamma_a != ex.gamma_b);
  CHECK(brute_force_surface_type(dp_family_from_model(reference_model())) == "one-re-one-im-line");
  // Lines annihilate Im c.
  for (const auto& l : {*ex.line_a, *ex.line_b}) {
    const Complex c = ex.c11 * (l[0] * l[0]) + ex.c12 * (l[0] * l[1]) + ex.c22 * (l[1] * l[1]);
    CHECK(std::abs(c.imag()) < 1e-12);
  }

  DPLocalModel real;
  real.d11 = {1.0, 2.0};
  real.d22 = {-1.0, 0.5};
  real.d12 = {0.3, 1.0};
  real.d21 = {2.0, -1.0};
  CHECK(surface_classification_2p(real).type == SurfaceType::Degenerate);

  struct Case {
    Complex q11, q12, q22;
    SurfaceType expect;
  };
  const Case cases[] = {
      {1.0 + I, 0.0, 1.0 + I, SurfaceType::ConeNoIntersection},
      {I, 2.0, -I, SurfaceType::OneReOneImLine},
      {-1.0 + I, 0.0, -1.0 - I, SurfaceType::ReClusterOfShells},
      {1.0 + I, 0.0, 1.0 - I, SurfaceType::ImDoubleIntersection},
      {-2.0 + 0.5 * I, 0.3 + 0.2 * I, -1.0 - 1.5 * I, SurfaceType::ReClusterOfShells},
  };
  for (const auto& c : cases) {
    const auto m = dp_model_from_quadratic(c.q11, c.q12, c.q22);
    const auto rep = surface_classification_2p(m);
    CHECK(rep.type == c.expect);
    CHECK(brute_force_surface_type(dp_family_from_model(m)) == std::string(to_string(rep.type)));
  }

  // Im c11 = 0: lines are dp2 = 0 and Im c12 dp1 + Im c22 dp2 = 0.
  const auto cd = surface_classification_2p(dp_model_from_quadratic(1.0, 2.0 * I, -1.0 + I));
  CHECK(cd.chart_degenerate);
  REQUIRE(cd.line_a);
  CHECK(std::abs((*cd.line_a)[1]) < 1e-15);
  CHECK(std::abs(2.0 * (*cd.line_b)[0] + 1.0 * (*cd.line_b)[1]) < 1e-12);

  DPLocalModel one;
  one.d11 = one.d12 = one.d21 = one.d22 = {1.0};
  CHECK_THROWS_AS(surface_classification_2p(one), DimensionError);
}
