#include <random>
#include <vector>

#include "mtv/errors.hpp"
#include "mtv/harness.hpp"
#include "mtv/mt_u.hpp"
#include "test_util.hpp"

using namespace mtv;
using mtv::test::near;
using mtv::test::vecof;

namespace {

UClass identity_class(int b, int bprime, const SlicePoint& x) {
  UClass m{b, bprime, {}, x};
  for (int i = 0; i < b + bprime; ++i) m.gs.push_back(identity(x.k()));
  return m;
}

}  // namespace

TEST(UBuild, Signatures) {
  Rng rng(1);
  const WPoint in = sample_wpoint(3, Orientation::incoming, rng);
  const std::vector<WPoint> single{in};
  const UClass m10 = u_build(single);
  EXPECT_EQ(m10.b, 1);
  EXPECT_EQ(m10.bprime, 0);

  WPoint out = sample_wpoint(3, Orientation::outgoing, rng);
  out.x = in.x;
  const std::vector<WPoint> pair{in, out};
  const UClass m11 = u_build(pair);
  EXPECT_EQ(m11.b, 1);
  EXPECT_EQ(m11.bprime, 1);
  EXPECT_TRUE(near(m11.gs[0], in.g, 0.0));
  EXPECT_TRUE(near(m11.gs[1], out.g, 0.0));
}

TEST(UBuild, DifferentSlicePartsRejected) {
  Rng rng(2);
  const WPoint a = sample_wpoint(2, Orientation::incoming, rng);
  const WPoint b = sample_wpoint(2, Orientation::outgoing, rng);
  const std::vector<WPoint> pts{a, b};
  EXPECT_THROW(u_build(pts), LevelSetError);
  EXPECT_THROW(u_build(std::vector<WPoint>{}), SignatureError);
}

TEST(UEquivalent, Examples) {
  Rng rng(3);
  const UClass m = sample_uclass(3, 2, 0, rng);
  EXPECT_TRUE(u_equivalent(m, m));
  const Matrix u = sample_centralizer(slice_embed(m.x), rng);
  UClass moved = m;
  moved.gs[0] = m.gs[0] * u;
  moved.gs[1] = m.gs[1] * u.inverse();
  EXPECT_TRUE(u_equivalent(m, moved));
  UClass half = m;
  half.gs[0] = m.gs[0] * u;
  EXPECT_FALSE(u_equivalent(m, half));
  UClass other = m;
  other.x.coeffs(0) += 0.1;
  EXPECT_FALSE(u_equivalent(m, other));
}

TEST(UEquivalent, OutgoingFactorsMoveOnTheLeft) {
  Rng rng(4);
  const UClass m = sample_uclass(3, 1, 1, rng);
  const Matrix u = sample_centralizer(slice_embed(m.x), rng);
  UClass moved = m;
  moved.gs[0] = m.gs[0] * u;
  moved.gs[1] = u.inverse() * m.gs[1];
  EXPECT_TRUE(u_equivalent(m, moved));
  EXPECT_TRUE(near(u_moment(moved, 0), u_moment(m, 0), 1e-10));
  EXPECT_TRUE(near(u_moment(moved, 1), u_moment(m, 1), 1e-10));
}

TEST(UMoment, IdentityRepresentative) {
  const SlicePoint x{vecof({0.5, Complex(1, 1), -2.0})};
  const UClass m = identity_class(1, 1, x);
  EXPECT_TRUE(near(u_moment(m, 0), slice_embed(x), 0.0));
  EXPECT_TRUE(near(u_moment(m, 1), -slice_embed(x), 0.0));
  EXPECT_THROW(u_moment(m, 2), DimensionError);
}

TEST(AxiomD, Residuals) {
  Rng rng(5);
  EXPECT_EQ(axiom_d_residual(sample_uclass(3, 1, 0, rng)), 0.0);
  const UClass m = sample_uclass(3, 2, 1, rng);
  double scale = 1.0;
  for (int i = 0; i < 3; ++i) scale = std::max(scale, std::pow(u_moment(m, i).norm(), 3));
  EXPECT_LT(axiom_d_residual(m) / scale, 1e-10);
}

TEST(AxiomD, DetectsStrayFactor) {
  // Moments of factors over different slice points, assembled without checks.
  const SlicePoint x{vecof({0.0, 1.0})};
  const SlicePoint y{vecof({0.0, 2.0})};
  const UClass a = identity_class(2, 0, x);
  const UClass b = identity_class(2, 0, y);
  const Matrix mu0 = u_moment(a, 0), mu1 = u_moment(b, 1);
  const double residual = std::abs((mu0 * mu0).trace() - (mu1 * mu1).trace());
  EXPECT_GT(residual, 1.0);
  EXPECT_EQ(axiom_d_residual(a), 0.0);
}

TEST(GAction, IdentityAndEquivariance) {
  Rng rng(6);
  const UClass m = sample_uclass(3, 1, 2, rng);
  for (int i = 0; i < m.factors(); ++i) {
    EXPECT_TRUE(u_equivalent(g_action(m, i, identity(3)), m));
    const Matrix g0 = sample_group(3, rng);
    EXPECT_TRUE(near(u_moment(g_action(m, i, g0), i), adjoint(g0, u_moment(m, i)), 1e-9));
  }
}

TEST(PermAction, IdentityAndSwap) {
  Rng rng(7);
  const UClass m = sample_uclass(2, 2, 2, rng);
  const std::vector<int> id{0, 1}, swap{1, 0};
  const UClass same = perm_action(m, id, id);
  for (int i = 0; i < 4; ++i) EXPECT_TRUE(near(same.gs[i], m.gs[i], 0.0));
  const UClass swapped = perm_action(m, swap, id);
  EXPECT_TRUE(near(swapped.gs[0], m.gs[1], 0.0));
  EXPECT_TRUE(near(swapped.gs[1], m.gs[0], 0.0));
  const std::vector<int> bad{0, 0};
  EXPECT_THROW(perm_action(m, bad, id), UsageError);
}

TEST(AAction, SumZeroElementFixesClass) {
  Rng rng(8);
  const UClass m = sample_uclass(3, 2, 1, rng);
  const AElement a = sample_a0(slice_embed(m.x), 3, rng);
  ASSERT_TRUE(a.in_a0());
  EXPECT_TRUE(u_equivalent(a_action(a, m), m));
}

TEST(USymplectic, AntisymmetricAndSingleFactor) {
  Rng rng(9);
  const UClass m = sample_uclass(3, 1, 0, rng);
  const UTangent u{{sample_matrix(3, rng)}, sample_vector(3, rng)};
  const UTangent v{{sample_matrix(3, rng)}, sample_vector(3, rng)};
  EXPECT_TRUE(near(u_symplectic(m, u, u), 0.0, 1e-13));
  const Complex w = w_symplectic(m.factor_point(0), {u.as[0], u.dc}, {v.as[0], v.dc});
  EXPECT_TRUE(near(u_symplectic(m, u, v), w, 1e-13));
}

TEST(USymplectic, TwoTermRewritings) {
  Rng rng(10);
  for (int b = 1; b <= 3; ++b) {
    const UClass m = sample_uclass(3, b, 0, rng);
    UTangent u{{}, sample_vector(3, rng)}, v{{}, sample_vector(3, rng)};
    for (int i = 0; i < b; ++i) {
      u.as.push_back(sample_matrix(3, rng));
      v.as.push_back(sample_matrix(3, rng));
    }
    const Complex omega = u_symplectic(m, u, v);
    const Complex wedge = u_form_moment_wedge(m, u, v);
    EXPECT_TRUE(near(u_form_two_term(m, u, v, WedgeConvention::bracket), wedge, 1e-10 * (1 + std::abs(wedge))));
    EXPECT_TRUE(near(u_form_two_term(m, u, v, WedgeConvention::matrix_product), omega,
                     1e-10 * (1 + std::abs(omega))));
  }
}

TEST(Glue, OneOneAgainstOneZero) {
  Rng rng(11);
  const UClass m1 = sample_uclass(3, 1, 1, rng);
  UClass m2{1, 0, {m1.gs[1].inverse() * sample_centralizer(slice_embed(m1.x), rng)}, m1.x};
  const UClass glued = glue(m1, 0, m2, 0);
  EXPECT_EQ(glued.b, 1);
  EXPECT_EQ(glued.bprime, 0);
  const UClass expected{1, 0, {m1.gs[0] * m1.gs[1] * m2.gs[0]}, m1.x};
  EXPECT_TRUE(u_equivalent(glued, expected));

  UClass trivial = identity_class(1, 1, m1.x);
  trivial.gs[0] = m1.gs[0];
  const UClass unit = identity_class(1, 0, m1.x);
  EXPECT_TRUE(u_equivalent(glue(trivial, 0, unit, 0), UClass{1, 0, {m1.gs[0]}, m1.x}));
}

TEST(Glue, Errors) {
  Rng rng(12);
  const UClass m1 = sample_uclass(2, 1, 1, rng);
  UClass m2 = sample_uclass(2, 1, 0, rng);
  m2.x = m1.x;
  EXPECT_THROW(glue(m1, 0, m2, 0), GluingError);  // moments do not match
  UClass far = m2;
  far.x.coeffs(1) += 1.0;
  EXPECT_THROW(glue(m1, 0, far, 0), GluingError);
  EXPECT_THROW(glue(m1, 1, m2, 0), DimensionError);
  const UClass in_only = identity_class(1, 0, m1.x);
  const UClass out_only = identity_class(0, 1, m1.x);
  EXPECT_THROW(glue(out_only, 0, in_only, 0), GluingError);
}

TEST(W00FromGlue, Examples) {
  const SlicePoint x{vecof({0.2, 1.0})};
  const W00Point w = w00_from_glue(identity_class(1, 0, x), identity_class(0, 1, x));
  EXPECT_TRUE(near(w.g, identity(2), 1e-14));
  Rng rng(13);
  const Matrix u = sample_centralizer(slice_embed(x), rng);
  UClass in = identity_class(1, 0, x);
  in.gs[0] = u;
  const W00Point wu = w00_from_glue(in, identity_class(0, 1, x));
  EXPECT_NO_THROW(validate(wu));
  EXPECT_TRUE(near(wu.g * slice_embed(x), slice_embed(x) * wu.g, 1e-10));
  const SlicePoint y{vecof({0.2, 2.0})};
  EXPECT_THROW(w00_from_glue(identity_class(1, 0, x), identity_class(0, 1, y)), GluingError);
}

TEST(CotangentMap, Examples) {
  Rng rng(14);
  const SlicePoint x{vecof({Complex(0.1, 0.3), 1.5, -0.5})};
  const Matrix xm = slice_embed(x);
  auto [g, y] = u11_to_tstar(identity_class(1, 1, x));
  EXPECT_TRUE(near(g, identity(3), 0.0));
  EXPECT_TRUE(near(y, xm, 1e-14));

  const Matrix g1 = sample_group(3, rng), g2 = sample_group(3, rng);
  UClass m{1, 1, {g1, identity(3)}, x};
  std::tie(g, y) = u11_to_tstar(m);
  EXPECT_TRUE(near(g, g1, 1e-14));
  EXPECT_TRUE(near(y, adjoint(g1, xm), 1e-12));

  const Matrix u = sample_centralizer(xm, rng);
  const UClass a{1, 1, {g1, g2}, x};
  const UClass b{1, 1, {g1 * u, u.inverse() * g2}, x};
  const auto ia = u11_to_tstar(a), ib = u11_to_tstar(b);
  EXPECT_TRUE(near(ia.first, ib.first, 1e-10));
  EXPECT_TRUE(near(ia.second, ib.second, 1e-10));
  EXPECT_TRUE(is_regular(ia.second));
  EXPECT_TRUE(u_equivalent(tstar_to_u11(ia.first, ia.second), a));
}

TEST(SlMembership, Examples) {
  const SlicePoint traceless{vecof({0.0, 1.0, 2.0})};
  EXPECT_TRUE(sl_membership(identity_class(2, 1, traceless)));
  const SlicePoint shifted{vecof({1.0, 1.0, 2.0})};
  EXPECT_FALSE(sl_membership(identity_class(2, 1, shifted)));
  UClass scaled = identity_class(2, 1, traceless);
  scaled.gs[1] *= 2.0;
  EXPECT_FALSE(sl_membership(scaled));
  const Complex root = std::polar(1.0, 2.0 * 3.14159265358979323846 / 3.0);
  UClass rooted = identity_class(2, 1, traceless);
  rooted.gs[1] *= root;
  EXPECT_TRUE(sl_membership(rooted));
}

TEST(FibrationData, RepresentativeIndependent) {
  Rng rng(15);
  const UClass m = sample_uclass(3, 1, 0, rng);
  const FibrationData d = fibration_data(m);
  EXPECT_TRUE(near(Matrix(d.x.coeffs), Matrix(m.x.coeffs), 0.0));
  ASSERT_EQ(d.moments.size(), 1u);
  EXPECT_TRUE(near(d.moments[0], adjoint(m.gs[0], slice_embed(m.x)), 1e-12));

  const UClass m2 = sample_uclass(3, 2, 1, rng);
  const Matrix xm = slice_embed(m2.x);
  const Matrix u1 = sample_centralizer(xm, rng), u2 = sample_centralizer(xm, rng);
  UClass other = m2;
  other.gs[0] = m2.gs[0] * u1;
  other.gs[1] = m2.gs[1] * u2;
  other.gs[2] = (u1 * u2).inverse() * m2.gs[2];
  const FibrationData a = fibration_data(m2), b = fibration_data(other);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(near(a.moments[i], b.moments[i], 1e-9));
  EXPECT_TRUE(near(fibre_coordinate(m2, other), identity(3), 1e-9));

  // same fibration data, different class: the fibre coordinate is the leftover element
  UClass apart = m2;
  apart.gs[0] = m2.gs[0] * u1;
  EXPECT_TRUE(near(fibration_data(apart).moments[0], a.moments[0], 1e-9));
  EXPECT_TRUE(near(fibre_coordinate(m2, apart), u1.inverse(), 1e-9));
}

TEST(Stabilizer, FreeOnSumZero) {
  Rng rng(16);
  for (auto [b, bp] : {std::pair{1, 0}, {1, 1}, {2, 1}, {0, 2}}) {
    const UClass m = sample_uclass(3, b, bp, rng);
    for (int i = 0; i < m.factors(); ++i) {
      EXPECT_EQ(stabilizer_dimension(m, i, true), 0);
      EXPECT_EQ(stabilizer_dimension(m, i, false), 3);
    }
  }
}

TEST(UPhiE, MovesLastIncomingFactor) {
  Rng rng(17);
  const UClass m = sample_uclass(3, 2, 1, rng);
  const UClass out = u_phi_e(m);
  EXPECT_EQ(out.b, 1);
  EXPECT_EQ(out.bprime, 2);
  EXPECT_LT(axiom_d_residual(out), 1e-8);
  EXPECT_THROW(u_phi_e(identity_class(0, 2, m.x)), SignatureError);
}
