#pragma once

// The quotients U^{b,b'} of (W^{1,0})^b x (W^{0,1})^{b'} by the sum-zero
// subgroup A_0, represented by tuples (g_1, ..., g_{b+b'}, X): incoming factors
// first, then outgoing. Two tuples represent the same point iff
// u_i = h_i^{-1} g_i (incoming) / g_i h_i^{-1} (outgoing) all centralise X and
// multiply to 1. For GL(k) and regular X the centraliser is abelian and
// connected, so no canonical representative is needed.

#include <span>
#include <utility>
#include <vector>

#include "mtv/mt_w.hpp"

namespace mtv {

struct UClass {
  int b = 0;
  int bprime = 0;
  std::vector<Matrix> gs;
  SlicePoint x;

  int factors() const { return b + bprime; }
  int k() const { return x.k(); }
  bool incoming(int i) const { return i < b; }
  WPoint factor_point(int i) const;
};

struct UTangent {
  std::vector<Matrix> as;
  Vector dc;
};

/// Points of W^{0,0} = {(g, X) : Ad(g) X = X}.
struct W00Point {
  Matrix g;
  SlicePoint x;
};

/// Checks signature, sizes and invertibility; throws on violation.
void validate(const UClass& m);
void validate(const W00Point& w);

/// Builds a class from points on the A_0 level set (all slice parts equal).
UClass u_build(std::span<const WPoint> points);

bool u_equivalent(const UClass& m1, const UClass& m2, double tol = 1e-9);

/// Moment map of factor i: Ad(g_i)X (incoming) or -Ad(g_i^{-1})X (outgoing).
Matrix u_moment(const UClass& m, int i);

/// max over m = 1..k and factor pairs of |P_m(mu_i) - P_m(mu_j)|, where
/// outgoing moments enter with a sign flip.
double axiom_d_residual(const UClass& m);

/// Incoming: g_i -> g0 g_i; outgoing: g_i -> g_i g0^{-1}.
UClass g_action(const UClass& m, int i, const Matrix& g0);

/// sigma permutes incoming slots (image slot sigma[i] receives g_i), tau the outgoing ones.
UClass perm_action(const UClass& m, std::span<const int> sigma, std::span<const int> tau);

/// Acts by an A-element, one polynomial sum per factor.
UClass a_action(const AElement& a, const UClass& m);

/// Sum of the per-factor forms of mt_w sharing one slice direction.
Complex u_symplectic(const UClass& m, const UTangent& u, const UTangent& v);

/// Two-term expression -<dX ^ sum g_i^{-1}dg_i> + <X, sum g_i^{-1}dg_i ^ g_i^{-1}dg_i>
/// on U^{b,0}.
Complex u_form_two_term(const UClass& m, const UTangent& u, const UTangent& v,
                        WedgeConvention convention);
/// sum_i <dg_i g_i^{-1} ^ d(Ad(g_i)X)> on U^{b,0}.
Complex u_form_moment_wedge(const UClass& m, const UTangent& u, const UTangent& v);

/// Fundamental vector field of xi acting on factor i.
UTangent u_g_fundamental(const UClass& m, int i, const Matrix& xi);

/// Symplectic quotient by the diagonal G on outgoing factor `p_out` of m1
/// (index among outgoing factors) and incoming factor `q_in` of m2. The
/// centraliser element produced by the gauge fix is absorbed by factor
/// `absorber` of the result. Result signature (b+c-1, b'+c'-1), incoming
/// factors of m1 then m2, outgoing factors of m1 then m2.
UClass glue(const UClass& m1, int p_out, const UClass& m2, int q_in, int absorber = 0);

/// Quotient of W^{1,0} x W^{0,1} by the diagonal G.
W00Point w00_from_glue(const UClass& incoming, const UClass& outgoing);

/// (g_1, g_2, X) -> (g_1 g_2, Ad(g_1) X) in G x g^reg.
std::pair<Matrix, Matrix> u11_to_tstar(const UClass& m);
/// Inverse: X = slice point of y, g_1 with Ad(g_1) X = y, g_2 = g_1^{-1} g.
UClass tstar_to_u11(const Matrix& g, const Matrix& y);

/// trace(X) = 0 and prod det(g_i)^{+-1} = 1 (outgoing factors inverted).
bool sl_membership(const UClass& m, double tol = 1e-9);

struct FibrationData {
  SlicePoint x;
  std::vector<Matrix> moments;
};

FibrationData fibration_data(const UClass& m);

/// For classes with equal fibration data, the product of the relating
/// centraliser elements u_i; it is the identity iff the classes agree.
Matrix fibre_coordinate(const UClass& m1, const UClass& m2);

/// Dimension of the infinitesimal stabiliser of m under the G-action on
/// `factor`, from the linearised relation: xi acting on `factor` equals an
/// A_0 direction (rho_i in Z(X), sum rho_i = 0). With `sum_zero = false` the
/// sum constraint is dropped (the full A^{n} relation).
int stabilizer_dimension(const UClass& m, int factor, bool sum_zero = true);

/// Axiom (E) on the last incoming factor: U^{b,b'} -> U^{b-1,b'+1}, the moved
/// factor becoming the last outgoing one.
UClass u_phi_e(const UClass& m);

}  // namespace mtv
