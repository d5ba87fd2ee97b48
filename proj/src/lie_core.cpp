#include "mtv/lie_core.hpp"

#include <cmath>
#include <map>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "mtv/errors.hpp"

namespace mtv {

Matrix identity(int k) { return Matrix::Identity(k, k); }

Matrix unit_matrix(int k, int row, int col) {
  Matrix e = Matrix::Zero(k, k);
  e(row, col) = 1.0;
  return e;
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": expected a nonempty square matrix");
  }
  if (!m.allFinite()) {
    throw DimensionError(std::string(what) + ": non-finite entry");
  }
}

void require_same_size(const Matrix& a, const Matrix& b, const char* what) {
  require_square(a, what);
  require_square(b, what);
  if (a.rows() != b.rows()) {
    throw DimensionError(std::string(what) + ": size mismatch " + std::to_string(a.rows()) +
                         " vs " + std::to_string(b.rows()));
  }
}

void require_invertible(const Matrix& g, const char* what) {
  require_square(g, what);
  if (relative_min_singular_value(g) < 1e-12) {
    throw InvertibilityError(std::string(what) + ": matrix is numerically singular");
  }
}

Complex pairing(const Matrix& x, const Matrix& y) {
  require_same_size(x, y, "pairing");
  // tr(XY) without forming the product
  return (x.transpose().array() * y.array()).sum();
}

Matrix bracket(const Matrix& x, const Matrix& y) { return x * y - y * x; }

Matrix adjoint(const Matrix& g, const Matrix& x) { return g * x * g.inverse(); }

Matrix matrix_exp(const Matrix& x) {
  require_square(x, "matrix_exp");
  return x.exp();
}

namespace {

Eigen::VectorXd singular_values(const Matrix& a) {
  if (a.size() == 0) return {};
  return Eigen::JacobiSVD<Matrix>(a).singularValues();
}

}  // namespace

int numerical_rank(const Matrix& a, double rel_tol) {
  const Eigen::VectorXd s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++r;
  }
  return r;
}

Matrix null_space(const Matrix& a, double rel_tol) {
  const Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > rel_tol * s(0)) ++r;
    }
  }
  const auto n = a.cols();
  return svd.matrixV().rightCols(n - r);
}

double relative_min_singular_value(const Matrix& a) {
  const Eigen::VectorXd s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

Vector vec(const Matrix& m) { return m.reshaped(); }

Matrix unvec(const Vector& v, int k) { return v.reshaped(k, k); }

Matrix commutator_operator(const Matrix& x) {
  require_square(x, "commutator_operator");
  const auto k = x.rows();
  const Matrix id = Matrix::Identity(k, k);
  // vec(XY) = (I (x) X) vec(Y), vec(YX) = (X^T (x) I) vec(Y)
  Matrix op = Matrix::Zero(k * k, k * k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) {
      op.block(i * k, j * k, k, k) = id(i, j) * x - x(j, i) * id;
    }
  }
  return op;
}

Matrix krylov(const Matrix& a, const Vector& v) {
  const auto k = a.rows();
  Matrix out(k, k);
  Vector w = v;
  for (Eigen::Index j = 0; j < k; ++j) {
    out.col(j) = w;
    w = a * w;
  }
  return out;
}

Complex inv_poly_eval(const InvariantPolynomial& p, const Matrix& x) {
  require_square(x, "inv_poly_eval");
  if (p.degree < 1 || p.degree > x.rows()) {
    throw DimensionError("inv_poly_eval: degree must lie in 1..k");
  }
  Matrix power = x;
  for (int m = 1; m < p.degree; ++m) power = power * x;
  return p.coefficient * power.trace();
}

Matrix polarized_gradient(const InvariantPolynomial& p, const Matrix& x) {
  require_square(x, "polarized_gradient");
  if (p.degree < 1 || p.degree > x.rows()) {
    throw DimensionError("polarized_gradient: degree must lie in 1..k");
  }
  Matrix power = identity(static_cast<int>(x.rows()));
  for (int m = 1; m < p.degree; ++m) power = power * x;
  return (p.coefficient * static_cast<double>(p.degree)) * power;
}

Matrix polarized_gradient(std::span<const InvariantPolynomial> ps, const Matrix& x) {
  require_square(x, "polarized_gradient");
  Matrix sum = Matrix::Zero(x.rows(), x.cols());
  for (const auto& p : ps) sum += polarized_gradient(p, x);
  return sum;
}

std::vector<Matrix> centralizer_basis(const Matrix& x) {
  const int k = static_cast<int>(x.rows());
  const Matrix kernel = null_space(commutator_operator(x));
  std::vector<Matrix> basis;
  basis.reserve(kernel.cols());
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) basis.push_back(unvec(kernel.col(c), k));
  return basis;
}

int centralizer_dimension(const Matrix& x) {
  const auto k = x.rows();
  return static_cast<int>(k * k) - numerical_rank(commutator_operator(x));
}

bool is_regular(const Matrix& x) { return centralizer_dimension(x) == x.rows(); }

bool AElement::in_a0(double tol) const {
  std::map<int, Complex> total;
  for (const auto& factor : factors) {
    for (const auto& p : factor) total[p.degree] += p.coefficient;
  }
  for (const auto& [degree, c] : total) {
    if (std::abs(c) > tol) return false;
  }
  return true;
}

}  // namespace mtv
