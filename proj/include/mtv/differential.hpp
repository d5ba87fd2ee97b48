#pragma once

// Finite-difference checks in flat coordinate charts, plus the charts used by
// the verification suites. Group factors use left-logarithmic coordinates
// around a base element; slice and eigenvalue coordinates are affine.
// All forms here are holomorphic, so real central differences along complex
// directions are exact derivatives up to O(h^2).

#include <functional>

#include "mtv/hilbert.hpp"

namespace mtv {

using ChartForm = std::function<Complex(const Vector& x, const Vector& u, const Vector& v)>;
using ChartMap = std::function<Matrix(const Vector& x)>;

/// d(omega)(u, v, w) for constant coordinate fields, by central differences.
Complex fd_exterior_derivative(const ChartForm& omega, const Vector& x, const Vector& u, const Vector& v,
                               const Vector& w, double step);

/// Central difference of a matrix-valued map along u.
Matrix fd_directional(const ChartMap& f, const Vector& x, const Vector& u, double step);

/// |omega(xi#, v) - sign * <d mu(v), xi>|, with d mu by central differences.
double fd_moment_condition(const ChartForm& omega, const ChartMap& mu, const Vector& x,
                           const Vector& xi_sharp, const Matrix& xi, const Vector& v, double step,
                           double sign = 1.0);

/// exp(-A) * (d/dt) exp(A + t dA) at t = 0, i.e. g^{-1} dg for g = g0 exp(A).
Matrix left_log_tangent(const Matrix& a, const Matrix& da);

/// Left-logarithmic chart of W around `base`: x = (vec A, c) with g = g0 exp(A).
class WChart {
public:
  explicit WChart(WPoint base);
  Vector origin() const;
  WPoint point(const Vector& x) const;
  WTangent tangent(const Vector& x, const Vector& dx) const;
  /// Chart vector of a tangent at the base point.
  Vector chart_tangent(const WTangent& t) const;

private:
  WPoint base_;
};

/// Left-logarithmic chart of U: x = (vec A_1, ..., vec A_n, c), g_i = g_i0 exp(A_i).
class UChart {
public:
  explicit UChart(UClass base);
  Vector origin() const;
  UClass point(const Vector& x) const;
  UTangent tangent(const Vector& x, const Vector& dx) const;
  Vector chart_tangent(const UTangent& t) const;

private:
  UClass base_;
};

/// F^{1,0} chart around D (pieces may share base points): x = (vec A, dz) with
/// G = G(D) exp(A) and J = J(D) + f_eigen_direction(D, dz).
class FChart {
public:
  explicit FChart(JetScheme base);
  Vector origin() const;
  ChartForm form() const;

private:
  JetScheme base_;
};

}  // namespace mtv
