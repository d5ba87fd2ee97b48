#pragma once

// Matrix Lie algebra primitives for gl(k, C).
//
// The invariant pairing is <X, Y> = tr(XY). On sl(k) the Killing form is
// 2k tr(XY); every identity used by this library is homogeneous in the
// pairing, so the constant is irrelevant.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mtv {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Singular values below kRankTol * (largest singular value) count as zero.
inline constexpr double kRankTol = 1e-9;

Matrix identity(int k);
Matrix unit_matrix(int k, int row, int col);

/// Throws DimensionError unless `m` is square with finite entries.
void require_square(const Matrix& m, const char* what);
void require_same_size(const Matrix& a, const Matrix& b, const char* what);
/// Throws InvertibilityError if `g` is numerically singular.
void require_invertible(const Matrix& g, const char* what);

Complex pairing(const Matrix& x, const Matrix& y);
Matrix bracket(const Matrix& x, const Matrix& y);

/// g x g^{-1}
Matrix adjoint(const Matrix& g, const Matrix& x);

Matrix matrix_exp(const Matrix& x);

/// Rank with the relative tolerance kRankTol.
int numerical_rank(const Matrix& a, double rel_tol = kRankTol);
/// Orthonormal basis (columns) of the numerical kernel of `a`.
Matrix null_space(const Matrix& a, double rel_tol = kRankTol);
/// Smallest singular value divided by the largest (0 for the zero matrix).
double relative_min_singular_value(const Matrix& a);

/// Column-major vec of a square matrix and its inverse.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, int k);

/// Matrix of the linear map Y -> XY - YX acting on vec(Y).
Matrix commutator_operator(const Matrix& x);

/// Krylov matrix [v, Av, ..., A^{k-1} v].
Matrix krylov(const Matrix& a, const Vector& v);

/// P_m(X) = coefficient * tr(X^m); the power traces m = 1..k generate C[gl(k)]^GL.
struct InvariantPolynomial {
  int degree = 1;
  Complex coefficient{1.0, 0.0};
};

Complex inv_poly_eval(const InvariantPolynomial& p, const Matrix& x);

/// C_P(X), defined by <C_P(X), Y> = deg(P) p(X, ..., X, Y) for the polarisation p.
/// For P = c tr(X^m) this is c m X^{m-1}.
Matrix polarized_gradient(const InvariantPolynomial& p, const Matrix& x);
/// Gradient of a formal sum of invariant polynomials.
Matrix polarized_gradient(std::span<const InvariantPolynomial> ps, const Matrix& x);

/// Orthonormal (entrywise inner product) basis of Z(X) = ker(Y -> [X, Y]).
std::vector<Matrix> centralizer_basis(const Matrix& x);
int centralizer_dimension(const Matrix& x);
/// dim Z(X) == k.
bool is_regular(const Matrix& x);

/// Element of the abelian group A^{n}: one formal sum of invariant polynomials per factor.
struct AElement {
  std::vector<std::vector<InvariantPolynomial>> factors;

  /// Sum over factors cancels degree by degree (membership in A_0).
  bool in_a0(double tol = 1e-12) const;
};

}  // namespace mtv
