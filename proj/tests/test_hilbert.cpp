#include <random>
#include <vector>

#include "mtv/errors.hpp"
#include "mtv/harness.hpp"
#include "mtv/hilbert.hpp"
#include "test_util.hpp"

using namespace mtv;
using mtv::test::mat;
using mtv::test::near;
using mtv::test::vecof;

namespace {

// Scheme with the given base points and lengths whose factor-0 matrix is g.
JetScheme scheme_from(const std::vector<Complex>& zs, const std::vector<int>& lengths, int b, int bprime,
                      const std::vector<Matrix>& gs) {
  JetScheme d;
  d.b = b;
  d.bprime = bprime;
  for (int l : lengths) d.k += l;
  for (std::size_t p = 0; p < zs.size(); ++p) {
    LocalPiece piece;
    piece.z = zs[p];
    piece.length = lengths[p];
    piece.jets.assign(b + bprime, std::vector<Vector>(lengths[p], Vector::Zero(d.k)));
    d.pieces.push_back(piece);
  }
  for (int j = 0; j < b + bprime; ++j) d = with_g_matrix(d, j, gs[j]);
  return d;
}

Vector unit(int k, int i) {
  Vector v = Vector::Zero(k);
  v(i) = 1.0;
  return v;
}

}  // namespace

TEST(JetNormalize, SingleFactorUnchanged) {
  LocalPiece p{0.5, 1, {{vecof({3.0, 0.0})}}};
  const LocalPiece n = jet_normalize(p);
  EXPECT_TRUE(near(Matrix(n.jets[0][0]), Matrix(vecof({3.0, 0.0})), 0.0));
}

TEST(JetNormalize, IdempotentAndCollapsesOrbits) {
  Rng rng(1);
  const JetScheme d = sample_jetscheme(4, 2, 1, rng);
  const JetScheme n = jet_normalize(d);
  const JetScheme nn = jet_normalize(n);
  for (std::size_t p = 0; p < n.pieces.size(); ++p) {
    const auto& piece = n.pieces[p];
    for (int j = 0; j < 3; ++j)
      for (int m = 0; m < piece.length; ++m)
        EXPECT_TRUE(near(Matrix(nn.pieces[p].jets[j][m]), Matrix(piece.jets[j][m]), 1e-12));

    // lambda_0 = a + b eps + c eps^2, lambda_1 = 2, lambda_2 = (lambda_0 lambda_1)^{-1}
    const int l = piece.length;
    const Complex a(1.2, 0.3), b(-0.4, 0.9), c(0.25, -0.5);
    Vector l0 = Vector::Zero(l), l1 = Vector::Zero(l), l2 = Vector::Zero(l);
    l0(0) = a;
    if (l > 1) l0(1) = b;
    if (l > 2) l0(2) = c;
    l1(0) = 2.0;
    // series inverse of 2 l0
    Vector prod = 2.0 * l0;
    l2(0) = 1.0 / prod(0);
    for (int i = 1; i < l; ++i) {
      Complex s = 0.0;
      for (int r = 1; r <= i; ++r) s += prod(r) * l2(i - r);
      l2(i) = -s / prod(0);
    }
    const LocalPiece moved = jet_group_action(d.pieces[p], {l0, l1, l2});
    const LocalPiece nm = jet_normalize(moved);
    for (int j = 0; j < 3; ++j)
      for (int m = 0; m < l; ++m)
        EXPECT_TRUE(near(Matrix(nm.jets[j][m]), Matrix(piece.jets[j][m]), 1e-10));
  }
}

TEST(Nondegenerate, Examples) {
  const int k = 3;
  const JetScheme simple = scheme_from({0.0, 1.0, 2.0}, {1, 1, 1}, 1, 0, {identity(k)});
  EXPECT_TRUE(nondegenerate(simple));
  EXPECT_TRUE(locally_nondegenerate(simple));

  JetScheme shared = simple;
  shared.pieces[1].jets[0][0] = 2.0 * shared.pieces[0].jets[0][0];
  // a repeated direction leaves a k(k-1)-dimensional stabiliser
  EXPECT_FALSE(nondegenerate(shared));
  EXPECT_FALSE(locally_nondegenerate(shared));
  EXPECT_EQ(stabilizer_dimension(shared, 0), k);

  const JetScheme fat = scheme_from({0.5}, {3}, 1, 0, {identity(k)});
  EXPECT_TRUE(nondegenerate(fat));

  JetScheme broken = fat;
  broken.pieces[0].jets[0][1] = Vector::Zero(k);
  EXPECT_FALSE(locally_nondegenerate(broken));
  EXPECT_EQ(stabilizer_dimension(broken, 0), k);

  const JetScheme collide = scheme_from({1.0, 1.0, 2.0}, {1, 1, 1}, 1, 0, {identity(k)});
  EXPECT_TRUE(locally_nondegenerate(collide));
  EXPECT_FALSE(nondegenerate(collide));
  EXPECT_FALSE(is_transverse(collide));
}

TEST(FittingTransverse, Validation) {
  const JetScheme d = scheme_from({0.0, 1.0}, {2, 1}, 1, 1, {identity(3), identity(3)});
  EXPECT_TRUE(fitting_transverse(d));
  JetScheme short_total = d;
  short_total.k = 4;
  EXPECT_THROW(fitting_transverse(short_total), ValidationError);
  JetScheme missing = d;
  missing.pieces[0].jets.pop_back();
  EXPECT_THROW(fitting_transverse(missing), ValidationError);
  JetScheme wrong_len = d;
  wrong_len.pieces[0].jets[0].pop_back();
  EXPECT_THROW(fitting_transverse(wrong_len), ValidationError);
}

TEST(JordanOf, Examples) {
  const JetScheme simple = scheme_from({0.0, 1.0, 2.0}, {1, 1, 1}, 1, 0, {identity(3)});
  EXPECT_TRUE(near(jordan_of(simple), mat({{0, 0, 0}, {0, 1, 0}, {0, 0, 2}}), 0.0));
  const Complex z(0.5, 1);
  const JetScheme block = scheme_from({z}, {3}, 1, 0, {identity(3)});
  EXPECT_TRUE(near(jordan_of(block), mat({{z, 1, 0}, {0, z, 1}, {0, 0, z}}), 0.0));
  const JetScheme mixed = scheme_from({0.0, 1.0}, {2, 1}, 1, 0, {identity(3)});
  EXPECT_TRUE(near(jordan_of(mixed), mat({{0, 1, 0}, {0, 0, 0}, {0, 0, 1}}), 0.0));
}

TEST(GMatrix, Examples) {
  const JetScheme block = scheme_from({0.0}, {3}, 1, 0, {identity(3)});
  EXPECT_TRUE(near(g_matrix(block, 0), identity(3), 0.0));
  JetScheme scalar{1, 1, 0, {LocalPiece{0.3, 1, {{vecof({Complex(2, -1)})}}}}};
  EXPECT_TRUE(near(g_matrix(scalar, 0), mat({{Complex(2, -1)}}), 0.0));
}

TEST(HilbToU, ScalarCase) {
  JetScheme d{1, 1, 0, {LocalPiece{Complex(0.3, 0.4), 1, {{vecof({Complex(2, -1)})}}}}};
  const UClass m = hilb_to_u(d);
  EXPECT_TRUE(near(m.gs[0], mat({{Complex(2, -1)}}), 1e-14));
  EXPECT_TRUE(near(m.x.coeffs(0), Complex(0.3, 0.4), 1e-14));
  const JetScheme back = u_to_hilb(m);
  ASSERT_EQ(back.pieces.size(), 1u);
  EXPECT_TRUE(near(back.pieces[0].z, Complex(0.3, 0.4), 1e-12));
  EXPECT_TRUE(near(Matrix(back.pieces[0].jets[0][0]), Matrix(d.pieces[0].jets[0][0]), 1e-12));
}

TEST(HilbToU, FatPoint) {
  const Complex z(0.2, -0.1);
  const Matrix g = mat({{1, 2}, {0.5, -1}});
  const JetScheme d = scheme_from({z}, {2}, 1, 0, {g});
  const UClass m = hilb_to_u(d);
  const Vector cp = characteristic_coefficients(slice_embed(m.x));
  EXPECT_TRUE(near(Matrix(cp), Matrix(vecof({1.0, -2.0 * z, z * z})), 1e-12));
  EXPECT_TRUE(near(u_moment(m, 0), f_moment(d, 0), 1e-12));
  EXPECT_TRUE(jet_equivalent(u_to_hilb(m), d));
}

TEST(HilbToU, JetGroupMovesWithinClass) {
  Rng rng(2);
  const JetScheme d = sample_jetscheme(3, 1, 1, rng);
  JetScheme moved = d;
  for (auto& p : moved.pieces) {
    Vector l0 = Vector::Zero(p.length), l1 = Vector::Zero(p.length);
    l0(0) = Complex(0.5, 1.0);
    l1(0) = 1.0 / l0(0);
    p = jet_group_action(p, {l0, l1});
  }
  EXPECT_TRUE(u_equivalent(hilb_to_u(d), hilb_to_u(moved)));
}

TEST(UToHilb, DistinctEigenvaluesGiveSimplePoints) {
  Rng rng(3);
  const UClass m = sample_uclass(4, 1, 1, rng);
  const JetScheme d = u_to_hilb(m);
  EXPECT_EQ(d.pieces.size(), 4u);
  for (const auto& p : d.pieces) EXPECT_EQ(p.length, 1);
  EXPECT_TRUE(u_equivalent(hilb_to_u(d), m, 1e-8));
}

TEST(UToHilb, RoundTripRandomSchemes) {
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(100 + seed);
    const int k = 1 + seed % 4;
    const JetScheme d = sample_jetscheme(k, 1 + seed % 2, seed % 2, rng);
    EXPECT_TRUE(jet_equivalent(u_to_hilb(hilb_to_u(d)), d)) << seed;
  }
}

TEST(FMoment, Examples) {
  const JetScheme d = scheme_from({0.0, 1.0}, {2, 1}, 1, 1, {identity(3), identity(3)});
  EXPECT_TRUE(near(f_moment(d, 0), jordan_of(d), 0.0));
  EXPECT_TRUE(near(f_moment(d, 1), -jordan_of(d).transpose(), 0.0));

  const Matrix perm = mat({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
  const JetScheme diag = scheme_from({1.0, 2.0, 3.0}, {1, 1, 1}, 1, 0, {perm});
  EXPECT_TRUE(near(f_moment(diag, 0), mat({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}}), 1e-15));
}

TEST(FMoment, JetGroupInvariant) {
  Rng rng(4);
  const JetScheme d = sample_jetscheme(4, 2, 1, rng);
  JetScheme moved = d;
  for (auto& p : moved.pieces) {
    std::vector<Vector> ls(3, Vector::Zero(p.length));
    ls[0](0) = 2.0;
    ls[1](0) = Complex(0, 1);
    ls[2](0) = 1.0 / (ls[0](0) * ls[1](0));
    if (p.length > 1) {
      ls[0](1) = 0.5;
      ls[2](1) = -0.5 * ls[2](0) / 2.0;
    }
    p = jet_group_action(p, ls);
  }
  for (int j = 0; j < 3; ++j) EXPECT_TRUE(near(f_moment(moved, j), f_moment(d, j), 1e-10));
}

TEST(FPresymplectic, AntisymmetricAndVanishesOnEigenDirections) {
  Rng rng(5);
  const JetScheme d = sample_jetscheme(3, 1, 0, rng);
  const FTangent u{sample_matrix(3, rng), sample_vector(3, rng)};
  const FTangent v{sample_matrix(3, rng), sample_vector(3, rng)};
  EXPECT_TRUE(near(f_presymplectic(d, u, u), 0.0, 1e-13));
  EXPECT_TRUE(near(f_presymplectic(d, u, v), -f_presymplectic(d, v, u), 1e-12));
  const FTangent pu{Matrix::Zero(3, 3), u.dz}, pv{Matrix::Zero(3, 3), v.dz};
  EXPECT_TRUE(near(f_presymplectic(d, pu, pv), 0.0, 1e-14));
  const JetScheme two = sample_jetscheme(3, 2, 0, rng);
  EXPECT_THROW(f_presymplectic(two, u, v), SignatureError);
}

TEST(FPresymplectic, AgreesWithWFormThroughCorrespondence) {
  Rng rng(6);
  const Matrix g0 = sample_group(3, rng);
  const std::vector<Complex> zs{-0.8, Complex(0.1, 0.5), 0.9};
  const FTangent u{sample_matrix(3, rng), sample_vector(3, rng)};
  const FTangent v{sample_matrix(3, rng), sample_vector(3, rng)};
  const double h = 1e-5;
  // W tangent of the curve t -> hilb_to_u(exp(t rho) G, z + t dz)
  auto w_tangent = [&](const FTangent& t, const UClass& base) {
    auto at = [&](double s) {
      std::vector<Complex> moved = zs;
      for (int i = 0; i < 3; ++i) moved[i] += s * t.dz(i);
      return hilb_to_u(scheme_from(moved, {1, 1, 1}, 1, 0, {matrix_exp(s * t.rho) * g0}));
    };
    const UClass plus = at(h), minus = at(-h);
    return WTangent{base.gs[0].inverse() * (plus.gs[0] - minus.gs[0]) / (2 * h),
                    (plus.x.coeffs - minus.x.coeffs) / (2 * h)};
  };
  const JetScheme d = scheme_from(zs, {1, 1, 1}, 1, 0, {g0});
  const UClass m = hilb_to_u(d);
  const Complex w = w_symplectic(m.factor_point(0), w_tangent(u, m), w_tangent(v, m));
  EXPECT_TRUE(near(f_presymplectic(d, u, v), w, 1e-7 * (1 + std::abs(w))));
}

TEST(OrbitInvariant, Examples) {
  const JetScheme simple = scheme_from({2.0, 0.0, 1.0}, {1, 1, 1}, 1, 0, {identity(3)});
  const auto inv = orbit_invariant(simple);
  ASSERT_EQ(inv.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(inv[i].second, 1);
    EXPECT_TRUE(near(inv[i].first, static_cast<double>(i), 0.0));
  }
  const JetScheme block = scheme_from({0.5}, {3}, 1, 0, {identity(3)});
  const auto one = orbit_invariant(block);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].second, 3);
  EXPECT_TRUE(near(one[0].first, 0.5, 0.0));
}

TEST(JetGAction, MomentEquivariant) {
  Rng rng(7);
  const JetScheme d = sample_jetscheme(3, 1, 1, rng);
  const Matrix g0 = sample_group(3, rng);
  for (int j = 0; j < 2; ++j)
    EXPECT_TRUE(near(f_moment(jet_g_action(d, j, g0), j), adjoint(g0, f_moment(d, j)), 1e-10));
  const UClass acted = hilb_to_u(jet_g_action(d, 0, g0));
  EXPECT_TRUE(u_equivalent(acted, g_action(hilb_to_u(d), 0, g0), 1e-8));
}

TEST(JordanConjugator, ConjugatesJordanFormIntoSlice) {
  const auto jc = jordan_conjugator({0.0, Complex(1, 1)}, {2, 2});
  const JetScheme d = scheme_from({0.0, Complex(1, 1)}, {2, 2}, 1, 0, {identity(4)});
  EXPECT_TRUE(near(jc.t * jordan_of(d) * jc.t.inverse(), slice_embed(jc.x), 1e-10));
}
