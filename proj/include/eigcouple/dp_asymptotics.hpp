#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "eigcouple/degeneracy.hpp"
#include "eigcouple/family.hpp"

namespace eigcouple {

inline constexpr double kScenarioTol = 1e-10;

/// 2x2 problem of a DP under A0 + eps A1: entry (j, k) = (A1 u_k, v_j).
struct ReducedProblem {
  std::array<std::array<Complex, 2>, 2> entries;
  Complex mu_plus, mu_minus;  // mean of the diagonal +- principal root
  std::array<Complex, 2> coeff_plus, coeff_minus;  // (alpha, beta): u = alpha u1 + beta u2

  CMatrix matrix() const;
};

ReducedProblem reduced_problem(const CMatrix& a1, const DPFrame& frame);

/// d_ij^s = (dA/dp_s u_i, v_j), i indexing the right frame, j the left frame.
struct DPLocalModel {
  ParameterPoint p0;
  Complex lambda0;
  std::vector<Complex> d11, d12, d21, d22;

  std::size_t n() const noexcept { return d11.size(); }
};

DPLocalModel dp_sensitivities(const MatrixFamily& fam, const DPFrame& frame, const ParameterPoint& p0);

/// sum_k v_k dp_k for complex v and real dp.
Complex cdot(const std::vector<Complex>& v, std::span<const double> dp);

struct DPSplit {
  Complex lambda_plus, lambda_minus;
  double re_plus, re_minus, im_plus, im_minus;  // plus sheet = mean + principal sqrt(c)
  Complex c;
};

DPSplit split_multiparam(const DPLocalModel& m, std::span<const double> dp);

struct PersistenceReport {
  double re_c, im_c;
  std::array<double, 6> residuals;  // Re/Im of <d11-d22,dp>, <d12,dp>, <d21,dp>
};

PersistenceReport persistence_conditions(const DPLocalModel& m, std::span<const double> dp);

/// Eigenvalue slopes along p1 through the DP.
std::array<Complex, 2> one_param_slopes(const DPLocalModel& m);

enum class CrossingScenario { NoCrossing, OneReOneIm, TwoRe, TwoIm, Degenerate };
std::string_view to_string(CrossingScenario s);

/// c(dp1) = c0 + c1 dp1 + c2 dp1^2 with dp_2..n fixed.
struct AvoidedCrossingReport {
  Complex c0, c1, c2;
  double D;
  std::optional<double> dp1_a, dp1_b;  // roots of Im c
  std::optional<double> c_a, c_b;      // Re c there
  CrossingScenario scenario;
  std::string note;  // populated for degenerate reports
};

AvoidedCrossingReport avoided_crossing_1p(const DPLocalModel& m, std::span<const double> dp_rest);

enum class SurfaceType { ConeNoIntersection, OneReOneImLine, ReClusterOfShells, ImDoubleIntersection, Degenerate };
std::string_view to_string(SurfaceType t);

/// c(dp) = c11 dp1^2 + c12 dp1 dp2 + c22 dp2^2 for two parameters.
struct SurfaceTypeReport {
  Complex c11, c12, c22;
  double D_prime;
  // Lines where Im c = 0, as directions (dp1, dp2) of unit length; present when D' > 0.
  std::optional<std::array<double, 2>> line_a, line_b;
  int gamma_a = 0, gamma_b = 0;  // sign of c along the lines
  SurfaceType type;
  bool chart_degenerate = false;  // Im c11 = 0, lines solved for dp1 in terms of dp2
  std::string note;
};

SurfaceTypeReport surface_classification_2p(const DPLocalModel& m);

}  // namespace eigcouple
