#pragma once

// Principal sl2-triples and the Slodowy slice S = e + Z(f) in gl(k).
//
// Conventions: e = sum E_{i+1,i} (negative roots are lower triangular), f is
// superdiagonal with [e, f] = h, and Z(f) is spanned by the powers f^0..f^{k-1}.
// A slice point is the coefficient vector c of e + sum_j c_j f^j.

#include <utility>

#include "mtv/lie_core.hpp"

namespace mtv {

struct PrincipalTriple {
  Matrix e;
  Matrix h;
  Matrix f;
};

PrincipalTriple principal_triple(int k);

struct SlicePoint {
  Vector coeffs;

  int k() const { return static_cast<int>(coeffs.size()); }
  static SlicePoint zero(int k) { return {Vector::Zero(k)}; }
};

Matrix slice_embed(const SlicePoint& s);

/// The unique slice point with the same characteristic polynomial as X.
/// Throws RegularityError if X is not regular.
SlicePoint slice_representative(const Matrix& x);

/// Slice point with characteristic polynomial t^k + a_1 t^{k-1} + ... + a_k,
/// `charpoly` = (1, a_1, ..., a_k).
SlicePoint slice_from_charpoly(const Vector& charpoly);

bool is_in_slice(const Matrix& x, double tol = 1e-10);

/// Coordinates of the projection of X onto the affine span of the slice, and
/// the norm of the off-slice remainder.
std::pair<SlicePoint, double> slice_coordinates(const Matrix& x);

/// Tangent vector sum_j dc_j f^j of the slice.
Matrix slice_tangent(const Vector& dc);

/// Coefficients (1, a_1, ..., a_k) of det(tI - X) (Faddeev-LeVerrier).
Vector characteristic_coefficients(const Matrix& x);

/// Some g with g * from * g^{-1} == to, for regular matrices with equal
/// characteristic polynomials. Built from cyclic vectors; throws
/// RegularityError if no well-conditioned cyclic vector is found and
/// ValidationError if the two matrices are not conjugate.
Matrix regular_conjugator(const Matrix& from, const Matrix& to);

}  // namespace mtv
