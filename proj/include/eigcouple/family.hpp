#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eigcouple/numkit.hpp"

namespace eigcouple {

using RealVector = std::vector<double>;
using ParameterPoint = RealVector;

double dot(std::span<const double> a, std::span<const double> b);

/// Finite sum of coefficient matrices times monomials in the parameters.
struct PolynomialFamily {
  struct Term {
    CMatrix coefficient;
    std::vector<int> exponents;
  };

  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<Term> terms;

  void validate() const;
  CMatrix evaluate(std::span<const double> p) const;
  CMatrix derivative(std::span<const double> p, std::size_t i) const;
  CMatrix second_derivative(std::span<const double> p, std::size_t i, std::size_t j) const;
};

/// Smooth m x m complex matrix family over n real parameters.
///
/// Families built with analytic derivative callbacks report DerivativeMode::Analytic;
/// otherwise derivatives come from 4th-order central differences, with the step
/// h = 1e-5 max(1, |p_i|) for first derivatives. Every stencil point must pass the
/// domain guard or a DomainError is thrown.
class MatrixFamily {
 public:
  using Evaluator = std::function<CMatrix(std::span<const double>)>;
  using Derivative = std::function<CMatrix(std::span<const double>, std::size_t)>;
  using SecondDerivative = std::function<CMatrix(std::span<const double>, std::size_t, std::size_t)>;
  using DomainGuard = std::function<bool(std::span<const double>)>;

  enum class DerivativeMode { Analytic, FiniteDifference };

  MatrixFamily(std::size_t m, std::size_t n, Evaluator evaluator, DomainGuard guard = {});
  MatrixFamily(std::size_t m, std::size_t n, Evaluator evaluator, Derivative derivative,
               SecondDerivative second_derivative, DomainGuard guard = {});

  static MatrixFamily from_polynomial(PolynomialFamily poly);

  std::size_t dimension() const noexcept { return m_; }
  std::size_t n_params() const noexcept { return n_; }
  DerivativeMode derivative_mode() const noexcept {
    return derivative_ ? DerivativeMode::Analytic : DerivativeMode::FiniteDifference;
  }
  bool in_domain(std::span<const double> p) const;

  CMatrix evaluate(std::span<const double> p) const;
  CMatrix derivative(std::span<const double> p, std::size_t i) const;
  CMatrix second_derivative(std::span<const double> p, std::size_t i, std::size_t j) const;

  CMatrix fd_derivative(std::span<const double> p, std::size_t i) const;
  CMatrix fd_second_derivative(std::span<const double> p, std::size_t i, std::size_t j) const;

  /// Underlying polynomial data when the family was parsed or built from one.
  const PolynomialFamily* polynomial() const noexcept { return poly_.get(); }

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

 private:
  void check_point(std::span<const double> p) const;
  CMatrix fd_first(const Evaluator& eval, std::span<const double> p, std::size_t i, double rel_step) const;

  std::size_t m_;
  std::size_t n_;
  Evaluator evaluator_;
  Derivative derivative_;
  SecondDerivative second_derivative_;
  DomainGuard guard_;
  std::shared_ptr<const PolynomialFamily> poly_;
  std::string name_;
};

struct DirectionalCurve {
  ParameterPoint p0;
  RealVector velocity;
  RealVector acceleration;
};

struct TaylorTriple {
  CMatrix A0, A1, A2;  // A(p(eps)) = A0 + eps A1 + eps^2 A2 / 2 + o(eps^2)
};

TaylorTriple taylor_along_curve(const MatrixFamily& f, const DirectionalCurve& c);

/// Straight line p0 + eps * direction.
DirectionalCurve line_through(ParameterPoint p0, RealVector direction);

/// Derivative of A along a direction: sum_i dA/dp_i d_i.
CMatrix directional_derivative(const MatrixFamily& f, std::span<const double> p,
                               std::span<const double> direction);

PolynomialFamily parse_polynomial(std::string_view json_text);
MatrixFamily parse_family(std::string_view json_text);
std::string serialize_polynomial(const PolynomialFamily& poly);

}  // namespace eigcouple
