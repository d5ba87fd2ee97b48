#include "mtv/differential.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "mtv/errors.hpp"

namespace mtv {

namespace {

void require_step(double step) {
  if (!(step > 0.0) || step * step <= std::numeric_limits<double>::epsilon()) {
    throw UsageError("finite differences: step too small");
  }
}

Complex directional(const ChartForm& omega, const Vector& x, const Vector& d, const Vector& u,
                    const Vector& v, double h) {
  return (omega(x + h * d, u, v) - omega(x - h * d, u, v)) / (2.0 * h);
}

}  // namespace

Complex fd_exterior_derivative(const ChartForm& omega, const Vector& x, const Vector& u, const Vector& v,
                               const Vector& w, double step) {
  require_step(step);
  return directional(omega, x, u, v, w, step) - directional(omega, x, v, u, w, step) +
         directional(omega, x, w, u, v, step);
}

Matrix fd_directional(const ChartMap& f, const Vector& x, const Vector& u, double step) {
  require_step(step);
  return (f(x + step * u) - f(x - step * u)) / (2.0 * step);
}

double fd_moment_condition(const ChartForm& omega, const ChartMap& mu, const Vector& x,
                           const Vector& xi_sharp, const Matrix& xi, const Vector& v, double step,
                           double sign) {
  const Complex lhs = omega(x, xi_sharp, v);
  const Complex rhs = pairing(fd_directional(mu, x, v, step), xi);
  return std::abs(lhs - sign * rhs);
}

Matrix left_log_tangent(const Matrix& a, const Matrix& da) {
  const auto k = a.rows();
  Matrix block = Matrix::Zero(2 * k, 2 * k);
  block.topLeftCorner(k, k) = a;
  block.bottomRightCorner(k, k) = a;
  block.topRightCorner(k, k) = da;
  const Matrix e = matrix_exp(block);
  return matrix_exp(-a) * e.topRightCorner(k, k);
}

namespace {

void require_dimension(const Vector& x, Eigen::Index n, const char* what) {
  if (x.size() != n) throw DimensionError(std::string(what) + ": wrong chart dimension");
}

}  // namespace

WChart::WChart(WPoint base) : base_(std::move(base)) { validate(base_); }

Vector WChart::origin() const {
  const int k = base_.k();
  Vector x = Vector::Zero(k * k + k);
  x.tail(k) = base_.x.coeffs;
  return x;
}

WPoint WChart::point(const Vector& x) const {
  const int k = base_.k();
  require_dimension(x, k * k + k, "WChart");
  return {base_.g * matrix_exp(unvec(x.head(k * k), k)), {x.tail(k)}, base_.orientation};
}

WTangent WChart::tangent(const Vector& x, const Vector& dx) const {
  const int k = base_.k();
  require_dimension(x, k * k + k, "WChart");
  require_dimension(dx, k * k + k, "WChart");
  return {left_log_tangent(unvec(x.head(k * k), k), unvec(dx.head(k * k), k)), dx.tail(k)};
}

Vector WChart::chart_tangent(const WTangent& t) const {
  const int k = base_.k();
  Vector dx(k * k + k);
  dx << vec(t.a), t.dc;
  return dx;
}

UChart::UChart(UClass base) : base_(std::move(base)) { validate(base_); }

Vector UChart::origin() const {
  const int k = base_.k();
  Vector x = Vector::Zero(base_.factors() * k * k + k);
  x.tail(k) = base_.x.coeffs;
  return x;
}

UClass UChart::point(const Vector& x) const {
  const int k = base_.k();
  const int n = base_.factors();
  require_dimension(x, n * k * k + k, "UChart");
  UClass m{base_.b, base_.bprime, {}, {x.tail(k)}};
  for (int i = 0; i < n; ++i) m.gs.push_back(base_.gs[i] * matrix_exp(unvec(x.segment(i * k * k, k * k), k)));
  return m;
}

UTangent UChart::tangent(const Vector& x, const Vector& dx) const {
  const int k = base_.k();
  const int n = base_.factors();
  require_dimension(x, n * k * k + k, "UChart");
  require_dimension(dx, n * k * k + k, "UChart");
  UTangent t{{}, dx.tail(k)};
  for (int i = 0; i < n; ++i) {
    t.as.push_back(left_log_tangent(unvec(x.segment(i * k * k, k * k), k), unvec(dx.segment(i * k * k, k * k), k)));
  }
  return t;
}

Vector UChart::chart_tangent(const UTangent& t) const {
  const int k = base_.k();
  const int n = base_.factors();
  Vector dx(n * k * k + k);
  for (int i = 0; i < n; ++i) dx.segment(i * k * k, k * k) = vec(t.as[i]);
  dx.tail(k) = t.dc;
  return dx;
}

FChart::FChart(JetScheme base) : base_(std::move(base)) { fitting_transverse(base_); }

Vector FChart::origin() const { return Vector::Zero(base_.k * base_.k + base_.k); }

ChartForm FChart::form() const {
  const int k = base_.k;
  const Matrix g0 = g_matrix(base_, 0);
  const Matrix j0 = jordan_of(base_);
  const JetScheme shape = base_;
  return [shape, k, g0, j0](const Vector& x, const Vector& u, const Vector& v) {
    require_dimension(x, k * k + k, "FChart");
    require_dimension(u, k * k + k, "FChart");
    require_dimension(v, k * k + k, "FChart");
    const Matrix a = unvec(x.head(k * k), k);
    const Matrix g = g0 * matrix_exp(a);
    const Matrix g_inv = g.inverse();
    // rho = dG G^{-1} = G (G^{-1} dG) G^{-1}
    const Matrix rho_u = g * left_log_tangent(a, unvec(u.head(k * k), k)) * g_inv;
    const Matrix rho_v = g * left_log_tangent(a, unvec(v.head(k * k), k)) * g_inv;
    const Matrix j = j0 + f_eigen_direction(shape, x.tail(k));
    return presymplectic_form(g, j, rho_u, f_eigen_direction(shape, u.tail(k)), rho_v,
                              f_eigen_direction(shape, v.tail(k)));
  };
}

}  // namespace mtv
