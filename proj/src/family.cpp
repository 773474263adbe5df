#include "eigcouple/family.hpp"

#include <cmath>
#include "json.hpp"

namespace eigcouple {

using nlohmann::json;

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// ---------------------------------------------------------------------------
// PolynomialFamily

namespace {

double monomial(std::span<const double> p, const std::vector<int>& e) {
  double v = 1.0;
  for (std::size_t k = 0; k < e.size(); ++k)
    for (int r = 0; r < e[k]; ++r) v *= p[k];
  return v;
}

// d/dp_i of prod p_k^{e_k}: returns coefficient and reduced exponents.
bool differentiate(std::vector<int>& e, double& coef, std::size_t i) {
  if (e[i] == 0) return false;
  coef *= e[i];
  --e[i];
  return true;
}

}  // namespace

void PolynomialFamily::validate() const {
  if (m == 0 || n == 0) throw DimensionError("polynomial family: m and n must be positive");
  for (const auto& t : terms) {
    if (t.coefficient.rows() != m || t.coefficient.cols() != m)
      throw DimensionError("polynomial family: coefficient is not m x m");
    if (t.exponents.size() != n) throw DimensionError("polynomial family: exponent tuple length != n");
    for (int e : t.exponents)
      if (e < 0) throw DimensionError("polynomial family: negative exponent");
  }
}

CMatrix PolynomialFamily::evaluate(std::span<const double> p) const {
  CMatrix a(m, m);
  for (const auto& t : terms) a += monomial(p, t.exponents) * t.coefficient;
  return a;
}

CMatrix PolynomialFamily::derivative(std::span<const double> p, std::size_t i) const {
  CMatrix a(m, m);
  for (const auto& t : terms) {
    auto e = t.exponents;
    double c = 1.0;
    if (!differentiate(e, c, i)) continue;
    a += (c * monomial(p, e)) * t.coefficient;
  }
  return a;
}

CMatrix PolynomialFamily::second_derivative(std::span<const double> p, std::size_t i,
                                            std::size_t j) const {
  CMatrix a(m, m);
  for (const auto& t : terms) {
    auto e = t.exponents;
    double c = 1.0;
    if (!differentiate(e, c, i) || !differentiate(e, c, j)) continue;
    a += (c * monomial(p, e)) * t.coefficient;
  }
  return a;
}

// ---------------------------------------------------------------------------
// MatrixFamily

MatrixFamily::MatrixFamily(std::size_t m, std::size_t n, Evaluator evaluator, DomainGuard guard)
    : m_(m), n_(n), evaluator_(std::move(evaluator)), guard_(std::move(guard)) {
  if (m_ == 0 || n_ == 0) throw DimensionError("MatrixFamily: m and n must be positive");
}

MatrixFamily::MatrixFamily(std::size_t m, std::size_t n, Evaluator evaluator, Derivative derivative,
                           SecondDerivative second_derivative, DomainGuard guard)
    : m_(m),
      n_(n),
      evaluator_(std::move(evaluator)),
      derivative_(std::move(derivative)),
      second_derivative_(std::move(second_derivative)),
      guard_(std::move(guard)) {
  if (m_ == 0 || n_ == 0) throw DimensionError("MatrixFamily: m and n must be positive");
}

MatrixFamily MatrixFamily::from_polynomial(PolynomialFamily poly) {
  poly.validate();
  auto shared = std::make_shared<const PolynomialFamily>(std::move(poly));
  MatrixFamily f(
      shared->m, shared->n, [shared](std::span<const double> p) { return shared->evaluate(p); },
      [shared](std::span<const double> p, std::size_t i) { return shared->derivative(p, i); },
      [shared](std::span<const double> p, std::size_t i, std::size_t j) {
        return shared->second_derivative(p, i, j);
      });
  f.poly_ = shared;
  return f;
}

bool MatrixFamily::in_domain(std::span<const double> p) const {
  if (p.size() != n_) return false;
  for (double x : p)
    if (!std::isfinite(x)) return false;
  return !guard_ || guard_(p);
}

void MatrixFamily::check_point(std::span<const double> p) const {
  if (p.size() != n_)
    throw DimensionError("MatrixFamily: expected " + std::to_string(n_) + " parameters, got " +
                         std::to_string(p.size()));
  if (!in_domain(p)) throw DomainError("MatrixFamily: parameter point outside the family domain");
}

CMatrix MatrixFamily::evaluate(std::span<const double> p) const {
  check_point(p);
  CMatrix a = evaluator_(p);
  if (a.rows() != m_ || a.cols() != m_) throw DimensionError("MatrixFamily: evaluator returned wrong shape");
  return a;
}

CMatrix MatrixFamily::fd_first(const Evaluator& eval, std::span<const double> p, std::size_t i,
                               double rel_step) const {
  const double h = rel_step * std::max(1.0, std::abs(p[i]));
  RealVector q(p.begin(), p.end());
  auto at = [&](double offset) {
    q[i] = p[i] + offset;
    if (!in_domain(q)) throw DomainError("finite-difference stencil leaves the family domain");
    return eval(q);
  };
  CMatrix d = (-1.0 * at(2.0 * h)) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h);
  d *= 1.0 / (12.0 * h);
  return d;
}

CMatrix MatrixFamily::fd_derivative(std::span<const double> p, std::size_t i) const {
  check_point(p);
  if (i >= n_) throw DimensionError("derivative: parameter index out of range");
  return fd_first(evaluator_, p, i, 1e-5);
}

CMatrix MatrixFamily::fd_second_derivative(std::span<const double> p, std::size_t i,
                                           std::size_t j) const {
  check_point(p);
  if (i >= n_ || j >= n_) throw DimensionError("second_derivative: parameter index out of range");
  // Nested differences amplify roundoff by 1/h^2; the wider step keeps that near 1e-10.
  constexpr double kStep = 1e-3;
  Evaluator inner = [this, i](std::span<const double> q) { return fd_first(evaluator_, q, i, kStep); };
  return fd_first(inner, p, j, kStep);
}

CMatrix MatrixFamily::derivative(std::span<const double> p, std::size_t i) const {
  if (!derivative_) return fd_derivative(p, i);
  check_point(p);
  if (i >= n_) throw DimensionError("derivative: parameter index out of range");
  return derivative_(p, i);
}

CMatrix MatrixFamily::second_derivative(std::span<const double> p, std::size_t i,
                                        std::size_t j) const {
  if (!second_derivative_) return fd_second_derivative(p, i, j);
  check_point(p);
  if (i >= n_ || j >= n_) throw DimensionError("second_derivative: parameter index out of range");
  return second_derivative_(p, i, j);
}

// ---------------------------------------------------------------------------
// Curves

CMatrix directional_derivative(const MatrixFamily& f, std::span<const double> p,
                               std::span<const double> direction) {
  if (direction.size() != f.n_params()) throw DimensionError("direction length != n_params");
  CMatrix d(f.dimension(), f.dimension());
  for (std::size_t i = 0; i < direction.size(); ++i)
    if (direction[i] != 0.0) d += direction[i] * f.derivative(p, i);
  return d;
}

TaylorTriple taylor_along_curve(const MatrixFamily& f, const DirectionalCurve& c) {
  const std::size_t n = f.n_params();
  if (c.velocity.size() != n || c.acceleration.size() != n)
    throw DimensionError("taylor_along_curve: curve data length != n_params");
  TaylorTriple t{f.evaluate(c.p0), CMatrix(f.dimension(), f.dimension()),
                 CMatrix(f.dimension(), f.dimension())};
  for (std::size_t i = 0; i < n; ++i) {
    if (c.velocity[i] == 0.0 && c.acceleration[i] == 0.0) continue;
    const CMatrix di = f.derivative(c.p0, i);
    t.A1 += c.velocity[i] * di;
    t.A2 += c.acceleration[i] * di;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double w = c.velocity[i] * c.velocity[j];
      if (w != 0.0) t.A2 += w * f.second_derivative(c.p0, i, j);
    }
  return t;
}

DirectionalCurve line_through(ParameterPoint p0, RealVector direction) {
  RealVector zero(direction.size(), 0.0);
  return {std::move(p0), std::move(direction), std::move(zero)};
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const json& require_key(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key, "missing required key");
  return *it;
}

std::size_t require_positive_int(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw ParseError(path, "expected a positive integer");
  return static_cast<std::size_t>(v.get<long long>());
}

std::vector<std::vector<double>> read_square(const json& v, std::size_t m, const std::string& path) {
  if (!v.is_array()) throw ParseError(path, "expected an array of rows");
  if (v.size() != m)
    throw DimensionError(path + ": expected " + std::to_string(m) + " rows, got " + std::to_string(v.size()));
  std::vector<std::vector<double>> rows(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    const json& row = v[i];
    if (!row.is_array()) throw ParseError(rp, "expected an array of numbers");
    if (row.size() != m)
      throw DimensionError(rp + ": expected " + std::to_string(m) + " columns, got " + std::to_string(row.size()));
    for (std::size_t j = 0; j < m; ++j) {
      if (!row[j].is_number()) throw ParseError(rp + "[" + std::to_string(j) + "]", "expected a number");
      rows[i][j] = row[j].get<double>();
    }
  }
  return rows;
}

}  // namespace

PolynomialFamily parse_polynomial(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", e.what());
  }
  PolynomialFamily poly;
  poly.m = require_positive_int(require_key(doc, "m", "$"), "$.m");
  poly.n = require_positive_int(require_key(doc, "n", "$"), "$.n");
  const json& terms = require_key(doc, "terms", "$");
  if (!terms.is_array()) throw ParseError("$.terms", "expected an array");
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string tp = "$.terms[" + std::to_string(k) + "]";
    const json& term = terms[k];
    const json& exp = require_key(term, "exp", tp);
    if (!exp.is_array()) throw ParseError(tp + ".exp", "expected an array");
    if (exp.size() != poly.n)
      throw ParseError(tp + ".exp", "exponent tuple has length " + std::to_string(exp.size()) +
                                        ", expected n = " + std::to_string(poly.n));
    PolynomialFamily::Term t;
    for (std::size_t i = 0; i < exp.size(); ++i) {
      if (!exp[i].is_number_integer() || exp[i].get<long long>() < 0)
        throw ParseError(tp + ".exp[" + std::to_string(i) + "]", "expected a non-negative integer");
      t.exponents.push_back(static_cast<int>(exp[i].get<long long>()));
    }
    const auto re = read_square(require_key(term, "re", tp), poly.m, tp + ".re");
    std::vector<std::vector<double>> im(poly.m, std::vector<double>(poly.m, 0.0));
    if (term.contains("im")) im = read_square(term["im"], poly.m, tp + ".im");
    t.coefficient = CMatrix(poly.m, poly.m);
    for (std::size_t i = 0; i < poly.m; ++i)
      for (std::size_t j = 0; j < poly.m; ++j) t.coefficient(i, j) = Complex(re[i][j], im[i][j]);
    poly.terms.push_back(std::move(t));
  }
  return poly;
}

MatrixFamily parse_family(std::string_view json_text) {
  return MatrixFamily::from_polynomial(parse_polynomial(json_text));
}

std::string serialize_polynomial(const PolynomialFamily& poly) {
  json doc;
  doc["m"] = poly.m;
  doc["n"] = poly.n;
  doc["terms"] = json::array();
  for (const auto& t : poly.terms) {
    json re = json::array();
    json im = json::array();
    for (std::size_t i = 0; i < poly.m; ++i) {
      json rr = json::array();
      json ri = json::array();
      for (std::size_t j = 0; j < poly.m; ++j) {
        rr.push_back(t.coefficient(i, j).real());
        ri.push_back(t.coefficient(i, j).imag());
      }
      re.push_back(rr);
      im.push_back(ri);
    }
    doc["terms"].push_back({{"exp", t.exponents}, {"re", re}, {"im", im}});
  }
  return doc.dump();
}

}  // namespace eigcouple
