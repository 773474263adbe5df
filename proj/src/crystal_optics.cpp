#include "eigcouple/crystal_optics.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace eigcouple {

namespace {

const Complex I{0.0, 1.0};

using Vec3 = std::array<double, 3>;

CMatrix gyration_of(const DielectricSpec& spec, const Vec3& s) {
  std::array<Complex, 3> g{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) g[i] += spec.gamma(i, j) * s[j];
  return gyration_matrix(g);
}

// -(a b^T + b a^T); the derivative pieces of the projector I - s s^T.
CMatrix sym_outer(const Vec3& a, const Vec3& b) {
  CMatrix m(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = -(a[i] * b[j] + b[i] * a[j]);
  return m;
}

CMatrix projector(const Vec3& s) {
  CMatrix p = CMatrix::identity(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) p(i, j) -= s[i] * s[j];
  return p;
}

// ds/ds_i with s3 = sqrt(1 - s1^2 - s2^2).
Vec3 tangent(const Vec3& s, std::size_t i) {
  Vec3 t{0.0, 0.0, -s[i] / s[2]};
  t[i] = 1.0;
  return t;
}

Vec3 curvature(const Vec3& s, std::size_t i, std::size_t j) {
  const double s3 = s[2];
  const double d = (i == j ? 1.0 : 0.0);
  return {0.0, 0.0, -d / s3 - s[i] * s[j] / (s3 * s3 * s3)};
}

void require_symmetric(const CMatrix& m, const char* what) {
  if (m.rows() != 3 || m.cols() != 3) throw DimensionError(std::string(what) + " must be 3x3");
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * std::max(1.0, m.max_abs()))
        throw DomainError(std::string(what) + " must be complex symmetric");
}

}  // namespace

void DielectricSpec::validate() const {
  require_symmetric(U, "U");
  require_symmetric(gamma, "gamma");
}

bool chart_contains(double s1, double s2) {
  return std::isfinite(s1) && std::isfinite(s2) && s1 * s1 + s2 * s2 < 1.0 - kChartMargin;
}

Direction direction_from_chart(double s1, double s2) {
  if (!chart_contains(s1, s2)) throw DomainError("direction outside the upper-hemisphere chart");
  return {s1, s2, std::sqrt(1.0 - s1 * s1 - s2 * s2)};
}

CMatrix gyration_matrix(const std::array<Complex, 3>& g) {
  return I * CMatrix{{0.0, -g[2], g[1]}, {g[2], 0.0, -g[0]}, {-g[1], g[0], 0.0}};
}

CMatrix eta(const DielectricSpec& spec, const Direction& s) { return spec.U + gyration_of(spec, s); }

CMatrix optical_matrix(const DielectricSpec& spec, const Direction& s) {
  return projector(s) * eta(spec, s);
}

std::array<Complex, 2> refractive_indices(const DielectricSpec& spec, const Direction& s,
                                          double tol_cluster) {
  auto ev = eigenvalues(optical_matrix(spec, s));
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  for (std::size_t k = 1; k < 3; ++k)
    if (std::abs(ev[k]) <= 10.0 * tol_cluster)
      throw BranchError("refractive_indices: a nonzero-branch eigenvalue is too close to 0");
  return {1.0 / std::sqrt(ev[1]), 1.0 / std::sqrt(ev[2])};
}

MatrixFamily family_adapter(const DielectricSpec& spec) {
  spec.validate();
  auto unit = [](std::span<const double> p) {
    return Vec3{p[0], p[1], std::sqrt(1.0 - p[0] * p[0] - p[1] * p[1])};
  };
  auto evaluate = [spec, unit](std::span<const double> p) { return optical_matrix(spec, unit(p)); };
  auto first = [spec, unit](std::span<const double> p, std::size_t i) {
    const Vec3 s = unit(p);
    const Vec3 t = tangent(s, i);
    return sym_outer(t, s) * eta(spec, s) + projector(s) * gyration_of(spec, t);
  };
  auto second = [spec, unit](std::span<const double> p, std::size_t i, std::size_t j) {
    const Vec3 s = unit(p);
    const Vec3 ti = tangent(s, i), tj = tangent(s, j), c = curvature(s, i, j);
    CMatrix dp2 = sym_outer(c, s) + sym_outer(ti, tj);
    return dp2 * eta(spec, s) + sym_outer(ti, s) * gyration_of(spec, tj) +
           sym_outer(tj, s) * gyration_of(spec, ti) + projector(s) * gyration_of(spec, c);
  };
  auto guard = [](std::span<const double> p) { return chart_contains(p[0], p[1]); };
  return MatrixFamily(3, 2, evaluate, first, second, guard);
}

DielectricSpec crystal_example_1() {
  DielectricSpec s;
  s.U = CMatrix{{3.0, I, 2.0 * I}, {I, 1.0, 0.0}, {2.0 * I, 0.0, 2.0}};
  s.gamma = CMatrix{{0, 0, 1}, {0, 0, 0}, {1, 0, 0}};
  return s;
}

DielectricSpec crystal_example_2() {
  DielectricSpec s;
  s.U = CMatrix{{1.0 + 5.0 * I, 0.0, 1.0 + 4.0 * I}, {0.0, 1.0 + 5.0 * I, 2.0 * I}, {1.0 + 4.0 * I, 2.0 * I, 4.0}};
  s.gamma = 4.0 * CMatrix{{0, 0, 1}, {0, 0, I}, {1, I, 0}};
  return s;
}

DielectricSpec parse_dielectric_spec(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", e.what());
  }
  if (!doc.is_object()) throw ParseError("$", "expected an object");
  auto read = [&](const char* key) {
    const std::string path = std::string("$.") + key;
    if (!doc.contains(key)) throw ParseError(path, "missing required key");
    const json& v = doc[key];
    if (!v.is_array() || v.size() != 3) throw ParseError(path, "expected a 3x3 array");
    std::array<std::array<double, 3>, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) {
      if (!v[i].is_array() || v[i].size() != 3)
        throw ParseError(path + "[" + std::to_string(i) + "]", "expected 3 numbers");
      for (std::size_t j = 0; j < 3; ++j) {
        if (!v[i][j].is_number())
          throw ParseError(path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]", "expected a number");
        out[i][j] = v[i][j].get<double>();
      }
    }
    return out;
  };
  const auto ur = read("U_re"), ui = read("U_im"), gr = read("gamma_re"), gi = read("gamma_im");
  DielectricSpec spec{CMatrix(3, 3), CMatrix(3, 3)};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      spec.U(i, j) = Complex(ur[i][j], ui[i][j]);
      spec.gamma(i, j) = Complex(gr[i][j], gi[i][j]);
    }
  spec.validate();
  return spec;
}

std::optional<MatrixFamily> builtin_family(std::string_view name) {
  std::optional<MatrixFamily> f;
  if (name == "crystal-example-1") f = family_adapter(crystal_example_1());
  if (name == "crystal-example-2") f = family_adapter(crystal_example_2());
  if (f) f->set_name(std::string(name));
  return f;
}

}  // namespace eigcouple
