#include "eigcouple/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eigcouple {

MatrixType infer_matrix_type(const MatrixFamily& fam, const ParameterPoint& p0, double rel_tol) {
  std::vector<CMatrix> mats{fam.evaluate(p0)};
  for (std::size_t k = 0; k < fam.n_params(); ++k) mats.push_back(fam.derivative(p0, k));
  double scale = 0.0;
  for (const auto& m : mats) scale = std::max(scale, m.max_abs());
  const double tol = rel_tol * std::max(scale, 1e-300);
  bool real = true, sym = true, herm = true;
  for (const auto& m : mats)
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        real = real && std::abs(m(i, j).imag()) <= tol;
        sym = sym && std::abs(m(i, j) - m(j, i)) <= tol;
        herm = herm && std::abs(m(i, j) - std::conj(m(j, i))) <= tol;
      }
  if (real) return sym ? MatrixType::RealSymmetric : MatrixType::RealNonsymmetric;
  if (herm) return MatrixType::Hermitian;
  return sym ? MatrixType::ComplexSymmetric : MatrixType::ComplexNonsymmetric;
}

AnchorAnalysis analyze_anchor(const MatrixFamily& fam, const ParameterPoint& p0, const AnalysisOptions& opts) {
  AnchorAnalysis an;
  an.p0 = p0;
  an.A0 = fam.evaluate(p0);
  an.spectrum = eigenvalues(an.A0);
  const auto clusters = find_double_eigenvalues(an.spectrum, opts.tol_cluster);
  if (clusters.empty()) throw DegeneracyError("no double eigenvalue within the cluster tolerance");
  auto relgap = [](const SpectralCluster& c) { return c.internal_gap / (1.0 + std::abs(c.center)); };
  auto best = clusters.begin();
  for (auto it = clusters.begin(); it != clusters.end(); ++it) {
    const bool better = opts.target ? std::abs(it->center - *opts.target) < std::abs(best->center - *opts.target)
                                    : relgap(*it) < relgap(*best);
    if (better) best = it;
  }
  an.cluster = *best;
  an.lambda0 = an.cluster.center;
  an.cls = classify(an.A0, an.lambda0, opts.tol_rank, opts.tol_cluster);
  an.matrix_type = infer_matrix_type(fam, p0);
  an.codimension = codimension(an.matrix_type, an.cls.kind);
  if (an.cls.kind == DegeneracyKind::EP) {
    an.chain = jordan_chain(an.A0, an.lambda0, opts.tol_rank);
    an.ep = sensitivities(fam, *an.chain, p0);
  } else if (an.cls.kind == DegeneracyKind::DP) {
    an.frame = dp_frame(an.A0, an.lambda0, opts.tol_rank);
    an.dp = dp_sensitivities(fam, *an.frame, p0);
  } else {
    throw DegeneracyError("cluster at the anchor is not a double eigenvalue");
  }
  return an;
}

std::array<Complex, 2> model_pair(const AnchorAnalysis& an, std::span<const double> dp) {
  if (an.ep) {
    const auto s = surface_eval(*an.ep, dp);
    return {s.plus(), s.minus()};
  }
  if (an.dp) {
    const auto s = split_multiparam(*an.dp, dp);
    return {s.lambda_plus, s.lambda_minus};
  }
  throw ModelError("model_pair: anchor has no local model");
}

PairMatch match_pair(const std::vector<Complex>& ev, Complex plus, Complex minus) {
  if (ev.size() < 2) throw DimensionError("match_pair: need at least two eigenvalues");
  double best = std::numeric_limits<double>::infinity(), second = best;
  PairMatch out{};
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = 0; j < ev.size(); ++j) {
      if (i == j) continue;
      const double c = std::abs(ev[i] - plus) + std::abs(ev[j] - minus);
      if (c < best) {
        second = best;
        best = c;
        out.plus = ev[i], out.minus = ev[j];
      } else if (c < second) {
        second = c;
      }
    }
  out.margin = second - best;
  return out;
}

std::vector<SurfaceRow> sample_surface(const MatrixFamily& fam, const AnchorAnalysis& an, const Window& w,
                                       std::size_t res) {
  if (fam.n_params() != 2) throw DimensionError("sample_surface: requires a two-parameter family");
  if (res < 2) throw DomainError("sample_surface: resolution must be at least 2");
  if (!(w.p1_min < w.p1_max) || !(w.p2_min < w.p2_max)) throw DomainError("sample_surface: empty window");
  std::vector<SurfaceRow> rows;
  rows.reserve(res * res);
  for (std::size_t j = 0; j < res; ++j) {
    const double p2 = w.p2_min + (w.p2_max - w.p2_min) * double(j) / double(res - 1);
    for (std::size_t i = 0; i < res; ++i) {
      const double p1 = w.p1_min + (w.p1_max - w.p1_min) * double(i) / double(res - 1);
      const RealVector p{p1, p2};
      if (!fam.in_domain(p)) throw DomainError("sample_surface: grid point outside the family domain");
      const RealVector dp{p1 - an.p0[0], p2 - an.p0[1]};
      const auto mp = model_pair(an, dp);
      const auto m = match_pair(eigenvalues(fam.evaluate(p)), mp[0], mp[1]);
      rows.push_back({p1, p2, mp[0], mp[1], m.plus, m.minus, m.margin < kPairingMargin});
    }
  }
  return rows;
}

}  // namespace eigcouple
