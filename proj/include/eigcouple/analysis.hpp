#pragma once

// End-to-end pipelines shared by the CLI, the Python module and the acceptance
// gate: anchor analysis (cluster -> classification -> local model) and grid sampling.

#include <array>
#include <optional>
#include <vector>

#include "eigcouple/degeneracy.hpp"
#include "eigcouple/dp_asymptotics.hpp"
#include "eigcouple/ep_asymptotics.hpp"
#include "eigcouple/family.hpp"

namespace eigcouple {

struct AnalysisOptions {
  double tol_cluster = kDefaultClusterTol;
  double tol_rank = kDefaultRankTol;
  std::optional<Complex> target;  // choose the cluster nearest to this value
};

/// Structure class of a family near p0, judged from A(p0) and its first derivatives.
MatrixType infer_matrix_type(const MatrixFamily& fam, const ParameterPoint& p0, double rel_tol = 1e-12);

struct AnchorAnalysis {
  ParameterPoint p0;
  CMatrix A0;
  std::vector<Complex> spectrum;
  SpectralCluster cluster;
  Complex lambda0;
  DegeneracyClass cls;
  MatrixType matrix_type;
  std::optional<int> codimension;
  std::optional<JordanChain> chain;
  std::optional<EPLocalModel> ep;
  std::optional<DPFrame> frame;
  std::optional<DPLocalModel> dp;

  bool is_ep() const noexcept { return ep.has_value(); }
  bool is_dp() const noexcept { return dp.has_value(); }
};

/// Throws DegeneracyError when no double eigenvalue exists at p0.
AnchorAnalysis analyze_anchor(const MatrixFamily& fam, const ParameterPoint& p0, const AnalysisOptions& opts = {});

/// Model eigenvalue pair (plus, minus) of the local model at p0 + dp.
std::array<Complex, 2> model_pair(const AnchorAnalysis& an, std::span<const double> dp);

struct Window {
  double p1_min, p1_max, p2_min, p2_max;
};

struct SurfaceRow {
  double p1, p2;
  Complex model_plus, model_minus;
  Complex exact_plus, exact_minus;
  bool ambiguous;  // nearest-value assignment margin below kPairingMargin
};

inline constexpr double kPairingMargin = 1e-3;

/// Two exact eigenvalues matched to (plus, minus) by minimal total distance, and the
/// cost gap to the next-best assignment.
struct PairMatch {
  Complex plus, minus;
  double margin;
};
PairMatch match_pair(const std::vector<Complex>& eigenvalues, Complex plus, Complex minus);

/// Row-major res x res grid (p1 fastest) over the window; requires a two-parameter family.
std::vector<SurfaceRow> sample_surface(const MatrixFamily& fam, const AnchorAnalysis& an, const Window& w,
                                       std::size_t res);

}  // namespace eigcouple
