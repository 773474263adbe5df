#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "eigcouple/family.hpp"

namespace eigcouple {

/// Inverse dielectric tensor eta(s) = U + G(gamma s): U gives birefringence and
/// dichroism, gamma the optical activity. Both are complex symmetric (not Hermitian).
struct DielectricSpec {
  CMatrix U;
  CMatrix gamma;

  void validate() const;
};

inline constexpr double kChartMargin = 1e-6;

using Direction = std::array<double, 3>;

/// Upper-hemisphere unit vector for chart coordinates (s1, s2).
Direction direction_from_chart(double s1, double s2);
bool chart_contains(double s1, double s2);

/// i [[0,-g3,g2],[g3,0,-g1],[-g2,g1,0]]
CMatrix gyration_matrix(const std::array<Complex, 3>& g);

CMatrix eta(const DielectricSpec& spec, const Direction& s);

/// (I - s s^T) eta(s); s^T A = 0 exactly in exact arithmetic.
CMatrix optical_matrix(const DielectricSpec& spec, const Direction& s);

/// n = lambda^{-1/2} for the two eigenvalues other than the structural zero.
std::array<Complex, 2> refractive_indices(const DielectricSpec& spec, const Direction& s,
                                          double tol_cluster = 1e-6);

/// Two-parameter family over the (s1, s2) chart with analytic derivatives.
MatrixFamily family_adapter(const DielectricSpec& spec);

DielectricSpec crystal_example_1();
DielectricSpec crystal_example_2();

DielectricSpec parse_dielectric_spec(std::string_view json_text);

/// "crystal-example-1" or "crystal-example-2".
std::optional<MatrixFamily> builtin_family(std::string_view name);

}  // namespace eigcouple
