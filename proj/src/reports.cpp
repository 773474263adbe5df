#include "eigcouple/reports.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace eigcouple {

namespace {

using nlohmann::ordered_json;

ordered_json cjson(Complex z) { return ordered_json{{"re", z.real()}, {"im", z.imag()}}; }

ordered_json cvec_json(const std::vector<Complex>& v) {
  ordered_json a = ordered_json::array();
  for (auto z : v) a.push_back(cjson(z));
  return a;
}

ordered_json finite_or_null(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

ordered_json header(const char* report, const AnchorAnalysis& an, const std::string& family) {
  ordered_json j;
  j["report"] = report;
  j["family"] = family;
  j["at"] = an.p0;
  j["kind"] = std::string(to_string(an.cls.kind));
  j["lambda0"] = cjson(an.lambda0);
  return j;
}

ordered_json model_json(const AnchorAnalysis& an) {
  if (an.ep) return ordered_json{{"f", an.ep->f}, {"g", an.ep->g}, {"h", an.ep->h}, {"r", an.ep->r}};
  if (an.dp)
    return ordered_json{{"d11", cvec_json(an.dp->d11)},
                        {"d12", cvec_json(an.dp->d12)},
                        {"d21", cvec_json(an.dp->d21)},
                        {"d22", cvec_json(an.dp->d22)}};
  return nullptr;
}

ordered_json opt_json(const std::optional<double>& x) { return x ? ordered_json(*x) : ordered_json(nullptr); }

template <std::size_t N>
ordered_json arr_json(const std::optional<std::array<double, N>>& x) {
  return x ? ordered_json(*x) : ordered_json(nullptr);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string classify_report(const AnchorAnalysis& an, const std::string& family_name) {
  ordered_json j = header("classify", an, family_name);
  j["algebraic_multiplicity"] = an.cls.algebraic_multiplicity;
  j["geometric_multiplicity"] = an.cls.geometric_multiplicity;
  j["cluster_gap"] = {{"internal", an.cluster.internal_gap}, {"external", finite_or_null(an.cluster.external_gap)}};
  j["matrix_type"] = std::string(to_string(an.matrix_type));
  j["codimension"] = an.codimension ? ordered_json(*an.codimension) : ordered_json(nullptr);
  j["singular_values"] = an.cls.singular_values;
  j["spectrum"] = cvec_json(an.spectrum);
  j["model"] = model_json(an);
  return dump(j);
}

void write_surface_csv(std::ostream& os, const std::vector<SurfaceRow>& rows) {
  os << "p1,p2,re_plus,re_minus,im_plus,im_minus,re_plus_exact,re_minus_exact,im_plus_exact,im_minus_exact,"
        "ambiguous\n";
  for (const auto& r : rows) {
    const double v[] = {r.p1,
                        r.p2,
                        r.model_plus.real(),
                        r.model_minus.real(),
                        r.model_plus.imag(),
                        r.model_minus.imag(),
                        r.exact_plus.real(),
                        r.exact_minus.real(),
                        r.exact_plus.imag(),
                        r.exact_minus.imag()};
    for (double x : v) os << format_double(x) << ',';
    os << (r.ambiguous ? 1 : 0) << '\n';
  }
}

std::string surface_report(const AnchorAnalysis& an, const std::string& family_name, const Window& w,
                           std::size_t res, const std::vector<SurfaceRow>& rows) {
  ordered_json j = header("surface", an, family_name);
  j["window"] = {w.p1_min, w.p1_max, w.p2_min, w.p2_max};
  j["res"] = res;
  ordered_json a = ordered_json::array();
  for (const auto& r : rows)
    a.push_back({{"p1", r.p1},
                 {"p2", r.p2},
                 {"re_plus", r.model_plus.real()},
                 {"re_minus", r.model_minus.real()},
                 {"im_plus", r.model_plus.imag()},
                 {"im_minus", r.model_minus.imag()},
                 {"re_plus_exact", r.exact_plus.real()},
                 {"re_minus_exact", r.exact_minus.real()},
                 {"im_plus_exact", r.exact_plus.imag()},
                 {"im_minus_exact", r.exact_minus.imag()},
                 {"ambiguous", r.ambiguous}});
  j["rows"] = std::move(a);
  return dump(j);
}

std::string loop_report(const AnchorAnalysis& an, const LoopSpec& spec, const LoopReport& rep) {
  ordered_json j = header("loop", an, "");
  j.erase("family");
  j["loop"] = {{"a", spec.a}, {"b", spec.b}, {"r", spec.r}, {"samples", spec.samples}};
  j["regime"] = std::string(to_string(rep.regime));
  j["K"] = rep.K;
  j["sigma"] = rep.sigma;
  j["sigma_sign"] = (rep.sigma > 0) - (rep.sigma < 0);
  j["branches_swap"] = rep.branches_swap;
  j["winding"] = rep.winding;
  ordered_json c = ordered_json::array();
  for (const auto& x : rep.crossings)
    c.push_back({{"axis", x.axis == 'r' ? "re" : "im"},
                 {"phi", x.phi},
                 {"re_offset", x.re_offset},
                 {"im_offset", x.im_offset},
                 {"lambda", cjson(an.lambda0 + Complex(x.re_offset, x.im_offset))}});
  j["axis_crossings"] = std::move(c);
  j["formula"] = {{"im_offset_squared", rep.formula_im_sq}, {"re_offset_squared", rep.formula_re_sq}};
  j["sign_changes"] = {{"re_axis", rep.re_axis_sign_changes}, {"im_axis", rep.im_axis_sign_changes}};
  j["quartic_residual"] = rep.quartic_residual;
  return dump(j);
}

void write_loop_csv(std::ostream& os, const LoopReport& rep) {
  os << "phi,re_plus,im_plus,re_minus,im_minus\n";
  for (const auto& s : rep.samples)
    os << format_double(s.phi) << ',' << format_double(s.plus.real()) << ',' << format_double(s.plus.imag()) << ','
       << format_double(s.minus.real()) << ',' << format_double(s.minus.imag()) << '\n';
}

std::string find_ep_report(const EPSearchResult& res, const std::string& family_name) {
  ordered_json j;
  j["report"] = "find-ep";
  j["family"] = family_name;
  j["converged"] = true;
  j["p_star"] = res.p_star;
  j["lambda0"] = cjson(res.lambda0);
  j["iterations"] = res.iterations;
  j["residual_history"] = res.residual_history;
  j["splitting"] = res.splitting;
  return dump(j);
}

std::string find_ep_failure_report(const NonConvergenceError& err, const std::string& family_name) {
  ordered_json j;
  j["report"] = "find-ep";
  j["family"] = family_name;
  j["converged"] = false;
  j["error"] = err.what();
  j["residual_history"] = err.history();
  return dump(j);
}

std::string scenario_report(const AnchorAnalysis& an, const std::string& family_name,
                            const std::vector<double>& dp_fixed) {
  ordered_json j = header("scenario", an, family_name);
  j["section"] = dp_fixed;
  j["model"] = model_json(an);
  if (an.ep) {
    const auto& m = *an.ep;
    const auto conic = complex_plane_conic(m, dp_fixed);
    j["conic"] = {{"gamma", conic.gamma},
                  {"quadratic", conic.quadratic},
                  {"asymptotes", conic.asymptotes},
                  {"asymptote_slopes", conic.asymptote_slopes},
                  {"degenerate", conic.degenerate},
                  {"hyperbola_rhs", conic.hyperbola_rhs},
                  {"vertex_axis", conic.vertex_axis},
                  {"vertices", conic.vertices}};
    const auto s = cross_section(m, dp_fixed);
    j["cross_section"] = {{"gamma", s.gamma},
                          {"p1_cross", m.p0[0] + s.p1_cross_offset},
                          {"re_level", s.re_level},
                          {"im_level", s.im_level},
                          {"crossing", std::string(to_string(s.crossing))},
                          {"re_slopes", arr_json(s.re_slopes)},
                          {"im_slopes", arr_json(s.im_slopes)},
                          {"vertical_tangents", s.vertical_tangents},
                          {"cusp_re_coeffs", arr_json(s.cusp_re_coeffs)},
                          {"cusp_im_coeffs", arr_json(s.cusp_im_coeffs)}};
    try {
      const auto cuts = branch_cuts(m);
      auto cut_json = [](const BranchCut& c) {
        return ordered_json{{"normal", c.normal},
                            {"f_sign", c.f_sign},
                            {"level", c.level},
                            {"ray", c.ray ? ordered_json(*c.ray) : ordered_json(nullptr)}};
      };
      j["branch_cuts"] = {{"re_cut", cut_json(cuts.re_cut)}, {"im_cut", cut_json(cuts.im_cut)}};
    } catch (const ModelError&) {
      j["branch_cuts"] = nullptr;
    }
  } else if (an.dp) {
    const auto& m = *an.dp;
    const auto slopes = one_param_slopes(m);
    j["one_param_slopes"] = cvec_json({slopes[0], slopes[1]});
    const auto ac = avoided_crossing_1p(m, dp_fixed);
    j["avoided_crossing"] = {{"c0", cjson(ac.c0)},
                             {"c1", cjson(ac.c1)},
                             {"c2", cjson(ac.c2)},
                             {"D", ac.D},
                             {"dp1_a", opt_json(ac.dp1_a)},
                             {"dp1_b", opt_json(ac.dp1_b)},
                             {"c_a", opt_json(ac.c_a)},
                             {"c_b", opt_json(ac.c_b)},
                             {"scenario", std::string(to_string(ac.scenario))},
                             {"note", ac.note}};
    if (m.n() == 2) {
      const auto st = surface_classification_2p(m);
      j["surface_type"] = {{"c11", cjson(st.c11)},
                           {"c12", cjson(st.c12)},
                           {"c22", cjson(st.c22)},
                           {"D_prime", st.D_prime},
                           {"line_a", arr_json(st.line_a)},
                           {"line_b", arr_json(st.line_b)},
                           {"gamma_a", st.gamma_a},
                           {"gamma_b", st.gamma_b},
                           {"type", std::string(to_string(st.type))},
                           {"chart_degenerate", st.chart_degenerate},
                           {"note", st.note}};
    } else {
      j["surface_type"] = nullptr;
    }
  }
  return dump(j);
}

void write_section_csv(std::ostream& os, const AnchorAnalysis& an, const std::vector<double>& dp_fixed,
                       double p1_min, double p1_max, std::size_t samples) {
  if (samples < 2) throw DomainError("write_section_csv: need at least 2 samples");
  os << "p1,re_plus,re_minus,im_plus,im_minus\n";
  std::vector<double> dp(dp_fixed.size() + 1);
  std::copy(dp_fixed.begin(), dp_fixed.end(), dp.begin() + 1);
  for (std::size_t k = 0; k < samples; ++k) {
    const double p1 = p1_min + (p1_max - p1_min) * double(k) / double(samples - 1);
    dp[0] = p1 - an.p0[0];
    const auto mp = model_pair(an, dp);
    os << format_double(p1) << ',' << format_double(mp[0].real()) << ',' << format_double(mp[1].real()) << ','
       << format_double(mp[0].imag()) << ',' << format_double(mp[1].imag()) << '\n';
  }
}

}  // namespace eigcouple
