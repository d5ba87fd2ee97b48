#pragma once

// The building blocks W^{1,0} = G x S (incoming) and W^{0,1} = G x S (outgoing).
//
// Tangent vectors are written in left-logarithmic coordinates: a = g^{-1} dg and
// a slice direction dc (dX = sum_j dc_j f^j). The symplectic forms are
//
//   incoming:  w(u,v) = <a_u, dX_v> - <a_v, dX_u> + <X, [a_u, a_v]>
//   outgoing:  w(u,v) = <r_u, dX_v> - <r_v, dX_u> - <X, [r_u, r_v]>,  r = g a g^{-1}
//
// i.e. -d<X, g^{-1}dg> and its image under g -> g^{-1}. With these signs
// w(xi#, .) = <d mu(.), xi> for mu = Ad(g)X (left action) and for
// mu' = -Ad(g^{-1})X (right action g -> g h^{-1}).

#include <span>

#include "mtv/lie_core.hpp"
#include "mtv/slodowy.hpp"

namespace mtv {

enum class Orientation { incoming, outgoing };

struct WPoint {
  Matrix g;
  SlicePoint x;
  Orientation orientation = Orientation::incoming;

  int k() const { return x.k(); }
};

struct WTangent {
  Matrix a;
  Vector dc;
};

/// Throws if g is singular or sizes disagree.
void validate(const WPoint& p);

Matrix w_moment(const WPoint& p);

Complex w_symplectic(const WPoint& p, const WTangent& u, const WTangent& v);

/// How <X, alpha ^ alpha> is read in the two-term expression
/// -<dX ^ g^{-1}dg> + <X, g^{-1}dg ^ g^{-1}dg>.
enum class WedgeConvention {
  matrix_product,  ///< (alpha ^ alpha)(u,v) = a_u a_v - a_v a_u
  bracket,         ///< <X,[a_u,a_v]> - <X,[a_v,a_u]>
};

/// Two-term expression in g^{-1}dg and dX (incoming only).
Complex w_form_two_term(const WPoint& p, const WTangent& u, const WTangent& v,
                        WedgeConvention convention);

/// <dg g^{-1} ^ d(Ad(g)X)> (incoming) or <g^{-1}dg ^ d(Ad(g^{-1})X)> (outgoing),
/// with <phi ^ psi>(u,v) = <phi(u), psi(v)> - <phi(v), psi(u)>.
Complex w_form_moment_wedge(const WPoint& p, const WTangent& u, const WTangent& v);

/// G-action: incoming g -> g0 g, outgoing g -> g g0^{-1}.
WPoint w_g_action(const WPoint& p, const Matrix& g0);

/// Fundamental vector field of xi for the G-action, in left-log coordinates.
WTangent w_g_fundamental(const WPoint& p, const Matrix& xi);

/// A-action of a single-factor polynomial combination:
/// incoming (g exp(C_P(X)), X), outgoing (exp(C_P(X)) g, X).
WPoint a_action(std::span<const InvariantPolynomial> poly, const WPoint& p);

/// Fundamental vector field of the A-action generated by `poly`.
WTangent a_fundamental(std::span<const InvariantPolynomial> poly, const WPoint& p);

/// (tr X, tr X^2, ..., tr X^k); the A-moment nu(g,X)(P) = P(X).
Vector a_moment(const WPoint& p);

Matrix theta_algebra(const Matrix& x);
Matrix theta_group(const Matrix& g);

/// p in GL(k) conjugating the opposite slice e^T + Z(f^T) onto S. Cached per k.
Matrix opposite_slice_conjugator(int k);

/// Ad(p) o theta: the involution under which phi_e is exactly anti-equivariant.
Matrix theta_twisted_algebra(const Matrix& x);
Matrix theta_twisted_group(const Matrix& g);

/// phi(g, X) = (p theta(g)^{-1} p^{-1}, -Ad(p) theta(X)) from W^{1,0} to W^{0,1}.
WPoint phi_e(const WPoint& incoming);
WPoint phi_e_inverse(const WPoint& outgoing);

}  // namespace mtv
