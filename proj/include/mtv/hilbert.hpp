#pragma once

// Transverse length-k subschemes of C x S^{b,b'} in jet form, and the
// correspondence with U^{b,b'}.
//
// A piece at z of length l carries, per factor, a truncated vector polynomial
// x(eps) = x^0 + x^1 eps + ... + x^{l-1} eps^{l-1}. Incoming factors hold
// vectors, outgoing factors hold covectors (acted on by g -> g^{-T}). The jet
// group multiplies the factors of a piece by scalar series with product 1.
//
// Matrix avatars: J(D) is a direct sum of Jordan blocks J_{z,l} with ones above
// the diagonal, and G_j(D) has the jet vectors of factor j as columns, so that
// the incoming moment is G J G^{-1}.

#include <utility>
#include <vector>

#include "mtv/mt_u.hpp"

namespace mtv {

struct LocalPiece {
  Complex z = 0.0;
  int length = 1;
  /// jets[factor][m] = x^m of that factor.
  std::vector<std::vector<Vector>> jets;
};

struct JetScheme {
  int k = 0;
  int b = 0;
  int bprime = 0;
  std::vector<LocalPiece> pieces;

  int factors() const { return b + bprime; }
  bool incoming(int j) const { return j < b; }
};

/// Tangent to F^{1,0} at D: rho in gl(k) (dG = rho G) and k coordinates of
/// the transverse slice through J(D). For a piece at offset o of length l,
/// dz[o + j] multiplies the j-th power of the lower shift of that block, so
/// dz[o] moves the base point and the others split the fat point.
struct FTangent {
  Matrix rho;
  Vector dz;
};

/// Canonical representative of the jet-group orbit: every factor but the last
/// gets its pivot coordinate (first nonzero entry of x^0) equal to 1 identically
/// in eps; the last factor absorbs the product constraint.
LocalPiece jet_normalize(const LocalPiece& piece);
JetScheme jet_normalize(const JetScheme& d);

/// Multiplies factor j of the piece by the series lambdas[j] (coefficients in eps).
LocalPiece jet_group_action(const LocalPiece& piece, const std::vector<Vector>& lambdas);

/// Validates lengths and jet shapes; throws ValidationError on malformed data.
bool fitting_transverse(const JetScheme& d);

/// Base points pairwise distinct (a point of the transverse Hilbert scheme).
bool is_transverse(const JetScheme& d, double tol = 1e-10);

/// Dimension of the stabiliser in GL(k) of the jets of factor j.
int stabilizer_dimension(const JetScheme& d, int j);

/// Finite stabiliser: every G_j invertible.
bool locally_nondegenerate(const JetScheme& d);

/// A point of the U-locus: transverse and locally nondegenerate.
bool nondegenerate(const JetScheme& d);

Matrix jordan_of(const JetScheme& d);

Matrix g_matrix(const JetScheme& d, int j);

/// Replaces the jets of factor j by the columns of g (in piece order).
JetScheme with_g_matrix(const JetScheme& d, int j, const Matrix& g);

/// Moves the base points; dz has one entry per piece.
JetScheme with_base_points(const JetScheme& d, const Vector& zs);

/// G-action on factor j: vectors x -> g0 x (incoming), covectors y -> g0^{-T} y.
JetScheme jet_g_action(const JetScheme& d, int j, const Matrix& g0);

/// Slice point X and conjugator T with T J T^{-1} = X for the given Jordan data.
struct JordanConjugator {
  Matrix t;
  SlicePoint x;
};
JordanConjugator jordan_conjugator(const std::vector<Complex>& zs, const std::vector<int>& lengths);

UClass hilb_to_u(const JetScheme& d);
JetScheme u_to_hilb(const UClass& m);

/// Pieces sorted by (Re z, Im z, length); the order used by u_to_hilb.
JetScheme sorted_pieces(const JetScheme& d);

/// Same pieces after sorting and jet normalisation, up to tol.
bool jet_equivalent(const JetScheme& d1, const JetScheme& d2, double tol = 1e-8);

/// G J G^{-1} (incoming) or -G^{-T} J^T G^T (outgoing) for factor j.
Matrix f_moment(const JetScheme& d, int j);

/// The block-diagonal matrix dJ for the slice coordinates dz.
Matrix f_eigen_direction(const JetScheme& d, const Vector& dz);

/// <rho_u, [rho_v, mu]> + <rho_u, G dJ_v G^{-1}> - <rho_v, G dJ_u G^{-1}>, mu = G J G^{-1}.
Complex presymplectic_form(const Matrix& g, const Matrix& j, const Matrix& rho_u, const Matrix& dj_u,
                           const Matrix& rho_v, const Matrix& dj_v);

Complex f_presymplectic(const JetScheme& d, const FTangent& u, const FTangent& v);

/// Sorted (eigenvalue, block size) pairs of J(D).
std::vector<std::pair<Complex, int>> orbit_invariant(const JetScheme& d);

}  // namespace mtv
