#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "eigcouple/family.hpp"
#include "eigcouple/numkit.hpp"

namespace eigcouple {

inline constexpr double kDefaultClusterTol = 1e-6;

struct SpectralCluster {
  std::array<Complex, 2> members;
  std::array<std::size_t, 2> indices;  // positions in the sorted eigenvalue list
  Complex center;                      // arithmetic mean
  double internal_gap = 0.0;
  double external_gap = 0.0;  // +inf when no other eigenvalue exists
};

/// Pairs |l_i - l_j| <= tol (1 + |l_i|), matched nearest-first. Throws MultiplicityError
/// when a third eigenvalue lies within 10 tol of a cluster center.
std::vector<SpectralCluster> find_double_eigenvalues(const CMatrix& a,
                                                     double tol_cluster = kDefaultClusterTol);
std::vector<SpectralCluster> find_double_eigenvalues(const std::vector<Complex>& sorted_values,
                                                     double tol_cluster = kDefaultClusterTol);

enum class DegeneracyKind { Simple, DP, EP };
std::string_view to_string(DegeneracyKind k);

struct DegeneracyClass {
  DegeneracyKind kind = DegeneracyKind::Simple;
  int algebraic_multiplicity = 1;
  int geometric_multiplicity = 1;
  std::vector<double> singular_values;  // of A - lambda0 I
};

/// Geometric multiplicity from rank(A - lambda0 I); algebraic multiplicity from the
/// eigenvalues within the cluster tolerance. Singular values within a factor 10 of the
/// rank threshold raise IndeterminateError.
DegeneracyClass classify(const CMatrix& a, Complex lambda0, double tol_rank = kDefaultRankTol,
                         double tol_cluster = kDefaultClusterTol);

struct JordanChain {
  Complex lambda0;
  CVector u0, u1, v0, v1;
};

struct ChainResiduals {
  double right_eigen;       // |(A0 - l0) u0|
  double right_associated;  // |(A0 - l0) u1 - u0|
  double left_eigen;        // |(A0* - conj l0) v0|
  double left_associated;   // |(A0* - conj l0) v1 - v0|
  double norm_u1_v0;        // |(u1, v0) - 1|
  double norm_u1_v1;        // |(u1, v1)|
  double max() const;
};

ChainResiduals chain_residuals(const CMatrix& a, const JordanChain& chain);

/// Throws ClassificationError unless lambda0 is an EP of `a`.
JordanChain jordan_chain(const CMatrix& a, Complex lambda0, double tol_rank = kDefaultRankTol);

/// Chain for a prescribed eigenvector u0 (any scaling); u1 is taken orthogonal to u0.
JordanChain complete_chain(const CMatrix& a, Complex lambda0, const CVector& u0,
                           double tol_rank = kDefaultRankTol);

struct DPFrame {
  Complex lambda0;
  CVector u1, u2, v1, v2;
};

struct FrameResiduals {
  double right_eigen;  // max_k |(A0 - l0) u_k|
  double left_eigen;   // max_k |(A0* - conj l0) v_k|
  double biorthogonality;  // max |(u_k, v_l) - delta_kl|
  double max() const;
};

FrameResiduals frame_residuals(const CMatrix& a, const DPFrame& frame);

/// Canonical frame: u1 is the normalized projection of the coordinate vector with the
/// largest projection onto the right eigenspace, u2 its unit complement; v's follow
/// from (u_k, v_l) = delta_kl. Throws ClassificationError unless lambda0 is a DP.
DPFrame dp_frame(const CMatrix& a, Complex lambda0, double tol_rank = kDefaultRankTol);

/// Frame for prescribed right eigenvectors; the left vectors are the unique
/// biorthonormal partners in the left eigenspace. Throws FrameError when the Gram
/// matrix condition number exceeds 1e8.
DPFrame dp_frame_with(const CMatrix& a, Complex lambda0, const CVector& u1, const CVector& u2,
                      double tol_rank = kDefaultRankTol);

enum class MatrixType { RealSymmetric, RealNonsymmetric, Hermitian, ComplexSymmetric, ComplexNonsymmetric };
std::string_view to_string(MatrixType t);
std::optional<MatrixType> parse_matrix_type(std::string_view s);

/// Standard codimension table; nullopt marks a degeneracy that cannot occur.
std::optional<int> codimension(MatrixType type, DegeneracyKind kind);

struct PairSelector {
  std::optional<Complex> target;  // pick the pair whose mean is nearest, else the closest pair
};

struct EPSearchOptions {
  int max_iterations = 30;
  int max_halvings = 10;
  double step_tol = 1e-13;
};

struct EPSearchResult {
  ParameterPoint p_star;
  Complex lambda0;
  int iterations = 0;
  std::vector<double> residual_history;  // |((l+ - l-)/2)^2| per iterate, starting point first
  double splitting = 0.0;                // |l+ - l-| at p_star
};

/// Damped Newton on ((l+ - l-)/2)^2 over a two-parameter family.
EPSearchResult find_ep(const MatrixFamily& f, const ParameterPoint& p_guess,
                       const PairSelector& which = {}, const EPSearchOptions& opts = {});

}  // namespace eigcouple
