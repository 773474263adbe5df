#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "eigcouple/degeneracy.hpp"
#include "eigcouple/family.hpp"

namespace eigcouple {

/// Splitting of an EP along a one-parameter curve:
///   l(eps) = l0 +- sqrt(mu1 eps) + mu2 eps,
///   u(eps) = u0 +- u1 sqrt(mu1 eps) + (mu1 u0 + mu2 u1 - G^{-1} A1 u0) eps,
/// with G = A0 - l0 I + u1 v1^*.
struct EPCurveSplit {
  Complex lambda0;
  Complex mu1, mu2;
  JordanChain chain;
  CVector g_inv_a1u0;

  std::array<Complex, 2> lambda(double eps) const;  // {plus, minus}
  std::array<CVector, 2> vectors(double eps) const;
};

/// Throws ModelError when G has condition number above 1e10.
EPCurveSplit curve_split(const JordanChain& chain, const CMatrix& a0, const CMatrix& a1);

/// First-order data at an EP: for each parameter s,
///   f_s + i g_s = (dA/dp_s u0, v0),  h_s + i r_s = (dA/dp_s u0, v1) + (dA/dp_s u1, v0).
struct EPLocalModel {
  ParameterPoint p0;
  Complex lambda0;
  RealVector f, g, h, r;

  std::size_t n() const noexcept { return f.size(); }
  bool degenerate() const;  // f = g = 0
};

EPLocalModel sensitivities(const MatrixFamily& fam, const JordanChain& chain, const ParameterPoint& p0);

struct EPSurfacePoint {
  double re_plus, re_minus, im_plus, im_minus;
  Complex plus() const { return {re_plus, im_plus}; }
  Complex minus() const { return {re_minus, im_minus}; }
};

/// Re/Im sheets of l0 + (<h,dp> + i<r,dp>)/2 +- sqrt(<f,dp> + i<g,dp>). The "plus" sheet
/// takes the principal root, so its Im radical carries sign(<g,dp>).
EPSurfacePoint surface_eval(const EPLocalModel& m, std::span<const double> dp);

/// Leading-order offset sqrt(<f,dp> + i<g,dp>) of the plus sheet (drift excluded).
Complex leading_offset(const EPLocalModel& m, std::span<const double> dp);

struct Tangency {
  double f_dp, g_dp;
};
Tangency tangency_conditions(const EPLocalModel& m, std::span<const double> dp);

/// Half-hyperplane {<g,dp> = 0, sign(<f,dp>) = f_sign or 0} where two sheets glue,
/// at level <level, dp> relative to Re l0 (re cut) or Im l0 (im cut).
struct BranchCut {
  RealVector normal;  // g
  RealVector f;
  int f_sign;         // -1 for the re cut, +1 for the im cut
  RealVector level;   // h/2 or r/2
  std::optional<RealVector> ray;  // unit ray direction when n = 2

  bool contains(std::span<const double> dp, double tol) const;
};

struct BranchCutSet {
  BranchCut re_cut, im_cut;
};

/// Throws ModelError when g = 0.
BranchCutSet branch_cuts(const EPLocalModel& m);

/// Trajectories in the complex plane as dp_1 varies with dp_2..n fixed. With
/// X = Re dl, Y = Im dl (drift excluded): g1 X^2 - 2 f1 X Y - g1 Y^2 = gamma.
struct ConicReport {
  double gamma;
  std::array<double, 3> quadratic;  // coefficients of X^2, XY, Y^2
  // Asymptotes g1 X - (f1 +- sqrt(f1^2 + g1^2)) Y = 0, as (a, b) in a X + b Y = 0.
  std::array<std::array<double, 2>, 2> asymptotes;
  std::array<double, 2> asymptote_slopes;  // dY/dX
  bool degenerate;                        // gamma == 0: the pair of lines itself
  // For gamma != 0: (g1 X - f1 Y)^2 - (f1^2 + g1^2) Y^2 = gamma g1, vertices along vertex_axis.
  double hyperbola_rhs;
  std::array<double, 2> vertex_axis;
  std::array<std::array<double, 2>, 2> vertices;
};

double gamma_of(const EPLocalModel& m, std::span<const double> dp_fixed);

/// dp_fixed holds dp_2..dp_n. Throws ChartError when g1 = 0.
ConicReport complex_plane_conic(const EPLocalModel& m, std::span<const double> dp_fixed);

enum class SectionCrossing { Re, Im, Cusp };
std::string_view to_string(SectionCrossing c);

/// Cross-section of the surfaces along p1 with dp_2..n fixed.
struct SectionReport {
  double gamma;
  double p1_cross_offset;  // p1^x - p1^0
  double re_level, im_level;
  SectionCrossing crossing;
  // Slopes of the two tangents at the crossing; empty for the part that avoids crossing.
  std::optional<std::array<double, 2>> re_slopes, im_slopes;
  bool vertical_tangents;  // gamma == 0
  // Double cusp when dp_fixed = 0: Re dl = +-sqrt(k dp1) + h1/2 dp1 with k = (f1 +- rho1)/2,
  // the sign picked so k dp1 >= 0; Im likewise with (-f1 +- rho1)/2.
  std::optional<std::array<double, 2>> cusp_re_coeffs, cusp_im_coeffs;
};

/// Throws ChartError when g1 = 0.
SectionReport cross_section(const EPLocalModel& m, std::span<const double> dp_fixed);

struct SectionSample {
  double p1;
  EPSurfacePoint value;
};
std::vector<SectionSample> sample_cross_section(const EPLocalModel& m, std::span<const double> dp_fixed,
                                                double dp1_min, double dp1_max, std::size_t samples);

struct LoopSpec {
  double a = 0.0, b = 0.0, r = 0.0;
  std::size_t samples = 720;
};

enum class LoopRegime { Inside, On, Outside };
std::string_view to_string(LoopRegime r);

struct AxisCrossing {
  char axis;  // 'r': crosses Re l = Re l0; 'i': crosses Im l = Im l0
  double phi;
  double re_offset, im_offset;  // leading-order dl at the crossing
};

struct LoopSample {
  double phi;
  Complex plus, minus;  // tracked model eigenvalues
};

struct LoopReport {
  LoopRegime regime;
  double K;      // f2 g1 - f1 g2
  double sigma;  // K (g1 b - g2 a)
  std::vector<AxisCrossing> crossings;
  // Closed-form squared ordinates: (Im dl)^2 on Re crossings, (Re dl)^2 on Im crossings.
  std::vector<double> formula_im_sq, formula_re_sq;
  std::vector<LoopSample> samples;  // phi in [0, 2 pi), branch-tracked
  bool branches_swap;               // monodromy: plus ends on minus after one turn
  std::vector<int> winding;         // per closed curve, around l0
  std::size_t re_axis_sign_changes, im_axis_sign_changes;  // of the sampled leading-order path
  double quartic_residual;          // max relative residual of the closed-loop quartic
};

/// Throws DomainError for r <= 0 or fewer than 16 samples, DimensionError unless n = 2,
/// ResolutionError when consecutive samples are too coarse to track the branches.
LoopReport loop_trajectory(const EPLocalModel& m, const LoopSpec& loop);

}  // namespace eigcouple
