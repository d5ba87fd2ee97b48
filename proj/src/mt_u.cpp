#include "mtv/mt_u.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mtv/errors.hpp"

namespace mtv {

WPoint UClass::factor_point(int i) const {
  if (i < 0 || i >= factors()) throw DimensionError("UClass: factor index out of range");
  return {gs[i], x, incoming(i) ? Orientation::incoming : Orientation::outgoing};
}

void validate(const UClass& m) {
  if (m.b < 0 || m.bprime < 0 || m.factors() < 1) {
    throw SignatureError("UClass: need b, b' >= 0 and b + b' >= 1");
  }
  if (static_cast<int>(m.gs.size()) != m.factors()) {
    throw SignatureError("UClass: number of group elements does not match the signature");
  }
  for (const auto& g : m.gs) {
    if (g.rows() != m.k()) throw DimensionError("UClass: group element has the wrong size");
    require_invertible(g, "UClass.gs");
  }
}

void validate(const W00Point& w) {
  require_invertible(w.g, "W00Point.g");
  const Matrix x = slice_embed(w.x);
  if ((w.g * x - x * w.g).norm() > 1e-10 * w.g.norm() * (1.0 + x.norm())) {
    throw ValidationError("W00Point: g does not centralise X");
  }
}

namespace {

bool same_slice(const SlicePoint& a, const SlicePoint& b, double tol) {
  return a.k() == b.k() && (a.coeffs - b.coeffs).norm() <= tol * (1.0 + a.coeffs.norm());
}

std::vector<Matrix> relating_elements(const UClass& m1, const UClass& m2) {
  std::vector<Matrix> us;
  for (int i = 0; i < m1.factors(); ++i) {
    if (m1.incoming(i)) {
      us.push_back(m2.gs[i].inverse() * m1.gs[i]);
    } else {
      us.push_back(m1.gs[i] * m2.gs[i].inverse());
    }
  }
  return us;
}

void require_same_signature(const UClass& m1, const UClass& m2, const char* what) {
  if (m1.b != m2.b || m1.bprime != m2.bprime || m1.k() != m2.k()) {
    throw SignatureError(std::string(what) + ": signatures differ");
  }
}

void require_factor(const UClass& m, int i, const char* what) {
  if (i < 0 || i >= m.factors()) throw DimensionError(std::string(what) + ": factor index out of range");
}

}  // namespace

UClass u_build(std::span<const WPoint> points) {
  if (points.empty()) throw SignatureError("u_build: no points");
  UClass m;
  m.x = points.front().x;
  bool seen_outgoing = false;
  for (const auto& p : points) {
    validate(p);
    if (p.orientation == Orientation::incoming) {
      if (seen_outgoing) throw ValidationError("u_build: incoming points must precede outgoing ones");
      ++m.b;
    } else {
      seen_outgoing = true;
      ++m.bprime;
    }
    if (!same_slice(p.x, m.x, 1e-12)) {
      throw LevelSetError("u_build: slice parts differ, point is off the A_0 level set");
    }
    m.gs.push_back(p.g);
  }
  return m;
}

bool u_equivalent(const UClass& m1, const UClass& m2, double tol) {
  require_same_signature(m1, m2, "u_equivalent");
  if (!same_slice(m1.x, m2.x, tol)) return false;
  const Matrix x = slice_embed(m1.x);
  const auto us = relating_elements(m1, m2);
  Matrix product = identity(m1.k());
  double scale = 1.0;
  for (const auto& u : us) {
    if ((u * x - x * u).norm() > tol * u.norm() * (1.0 + x.norm())) return false;
    product = product * u;
    scale *= std::max(1.0, u.norm());
  }
  return (product - identity(m1.k())).norm() <= tol * scale;
}

Matrix u_moment(const UClass& m, int i) {
  require_factor(m, i, "u_moment");
  return w_moment(m.factor_point(i));
}

double axiom_d_residual(const UClass& m) {
  const int k = m.k();
  // all P_m(mu_i) for incoming and P_m(-mu'_j) for outgoing must agree
  std::vector<Vector> values;
  for (int i = 0; i < m.factors(); ++i) {
    Matrix mu = u_moment(m, i);
    if (!m.incoming(i)) mu = -mu;
    Vector v(k);
    for (int d = 1; d <= k; ++d) v(d - 1) = inv_poly_eval({d, 1.0}, mu);
    values.push_back(v);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      worst = std::max(worst, (values[i] - values[j]).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

UClass g_action(const UClass& m, int i, const Matrix& g0) {
  require_factor(m, i, "g_action");
  UClass out = m;
  out.gs[i] = w_g_action(m.factor_point(i), g0).g;
  return out;
}

namespace {

void require_permutation(std::span<const int> p, int n, const char* what) {
  if (static_cast<int>(p.size()) != n) throw UsageError(std::string(what) + ": wrong length");
  std::vector<bool> seen(n, false);
  for (int v : p) {
    if (v < 0 || v >= n || seen[v]) throw UsageError(std::string(what) + ": not a permutation");
    seen[v] = true;
  }
}

}  // namespace

UClass perm_action(const UClass& m, std::span<const int> sigma, std::span<const int> tau) {
  require_permutation(sigma, m.b, "perm_action(sigma)");
  require_permutation(tau, m.bprime, "perm_action(tau)");
  UClass out = m;
  for (int i = 0; i < m.b; ++i) out.gs[sigma[i]] = m.gs[i];
  for (int i = 0; i < m.bprime; ++i) out.gs[m.b + tau[i]] = m.gs[m.b + i];
  return out;
}

UClass a_action(const AElement& a, const UClass& m) {
  if (static_cast<int>(a.factors.size()) != m.factors()) {
    throw SignatureError("a_action: A-element has the wrong number of factors");
  }
  UClass out = m;
  for (int i = 0; i < m.factors(); ++i) out.gs[i] = a_action(a.factors[i], m.factor_point(i)).g;
  return out;
}

namespace {

void require_tangent(const UClass& m, const UTangent& t) {
  if (static_cast<int>(t.as.size()) != m.factors() || t.dc.size() != m.k()) {
    throw DimensionError("UTangent: shape does not match the class");
  }
}

void require_bprime_zero(const UClass& m, const char* what) {
  if (m.bprime != 0) throw SignatureError(std::string(what) + ": defined on U^{b,0}");
}

}  // namespace

Complex u_symplectic(const UClass& m, const UTangent& u, const UTangent& v) {
  require_tangent(m, u);
  require_tangent(m, v);
  Complex total = 0.0;
  for (int i = 0; i < m.factors(); ++i) {
    total += w_symplectic(m.factor_point(i), {u.as[i], u.dc}, {v.as[i], v.dc});
  }
  return total;
}

Complex u_form_two_term(const UClass& m, const UTangent& u, const UTangent& v,
                        WedgeConvention convention) {
  require_bprime_zero(m, "u_form_two_term");
  require_tangent(m, u);
  require_tangent(m, v);
  const Matrix x = slice_embed(m.x);
  const Matrix dxu = slice_tangent(u.dc);
  const Matrix dxv = slice_tangent(v.dc);
  Matrix sum_u = Matrix::Zero(m.k(), m.k());
  Matrix sum_v = sum_u;
  Complex quadratic = 0.0;
  for (int i = 0; i < m.b; ++i) {
    sum_u += u.as[i];
    sum_v += v.as[i];
    if (convention == WedgeConvention::matrix_product) {
      quadratic += pairing(x, u.as[i] * v.as[i] - v.as[i] * u.as[i]);
    } else {
      quadratic += pairing(x, bracket(u.as[i], v.as[i])) - pairing(x, bracket(v.as[i], u.as[i]));
    }
  }
  return -(pairing(dxu, sum_v) - pairing(dxv, sum_u)) + quadratic;
}

Complex u_form_moment_wedge(const UClass& m, const UTangent& u, const UTangent& v) {
  require_bprime_zero(m, "u_form_moment_wedge");
  require_tangent(m, u);
  require_tangent(m, v);
  Complex total = 0.0;
  for (int i = 0; i < m.b; ++i) {
    total += w_form_moment_wedge(m.factor_point(i), {u.as[i], u.dc}, {v.as[i], v.dc});
  }
  return total;
}

UTangent u_g_fundamental(const UClass& m, int i, const Matrix& xi) {
  require_factor(m, i, "u_g_fundamental");
  UTangent t;
  t.dc = Vector::Zero(m.k());
  for (int j = 0; j < m.factors(); ++j) t.as.push_back(Matrix::Zero(m.k(), m.k()));
  t.as[i] = w_g_fundamental(m.factor_point(i), xi).a;
  return t;
}

UClass glue(const UClass& m1, int p_out, const UClass& m2, int q_in, int absorber) {
  validate(m1);
  validate(m2);
  if (m1.k() != m2.k()) throw DimensionError("glue: sizes differ");
  if (p_out < 0 || p_out >= m1.bprime) throw DimensionError("glue: outgoing index out of range");
  if (q_in < 0 || q_in >= m2.b) throw DimensionError("glue: incoming index out of range");
  const int nb = m1.b + m2.b - 1;
  const int nbp = m1.bprime + m2.bprime - 1;
  if (nb + nbp == 0) throw GluingError("glue: result has signature (0,0); use w00_from_glue");
  if (absorber < 0 || absorber >= nb + nbp) throw DimensionError("glue: absorber index out of range");

  const Matrix& gp = m1.gs[m1.b + p_out];
  const Matrix& hq = m2.gs[q_in];
  const Matrix mu1 = u_moment(m1, m1.b + p_out);
  const Matrix mu2 = u_moment(m2, q_in);
  const double scale = std::max({1.0, mu1.cwiseAbs().maxCoeff(), mu2.cwiseAbs().maxCoeff()});
  if ((mu1 + mu2).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw GluingError("glue: moment maps do not match");
  }
  if (!same_slice(m1.x, m2.x, 1e-9)) throw GluingError("glue: slice parts differ");

  // gauge-fix g_{p'} = 1; then h_q becomes z = g_{p'} h_q in Z(X), which the
  // relation moves onto another factor
  const Matrix z = gp * hq;

  UClass out;
  out.b = nb;
  out.bprime = nbp;
  out.x = m2.x;
  for (int i = 0; i < m1.b; ++i) out.gs.push_back(m1.gs[i]);
  for (int i = 0; i < m2.b; ++i) {
    if (i != q_in) out.gs.push_back(m2.gs[i]);
  }
  for (int i = 0; i < m1.bprime; ++i) {
    if (i != p_out) out.gs.push_back(m1.gs[m1.b + i]);
  }
  for (int i = 0; i < m2.bprime; ++i) out.gs.push_back(m2.gs[m2.b + i]);

  if (out.incoming(absorber)) {
    out.gs[absorber] = out.gs[absorber] * z;
  } else {
    out.gs[absorber] = z * out.gs[absorber];
  }
  return out;
}

W00Point w00_from_glue(const UClass& in, const UClass& out) {
  validate(in);
  validate(out);
  if (in.b != 1 || in.bprime != 0 || out.b != 0 || out.bprime != 1) {
    throw SignatureError("w00_from_glue: expects a (1,0) and a (0,1) class");
  }
  const Matrix mu_in = u_moment(in, 0);
  const Matrix mu_out = u_moment(out, 0);
  const double scale = std::max({1.0, mu_in.cwiseAbs().maxCoeff(), mu_out.cwiseAbs().maxCoeff()});
  if ((mu_in + mu_out).cwiseAbs().maxCoeff() > 1e-9 * scale || !same_slice(in.x, out.x, 1e-9)) {
    throw GluingError("w00_from_glue: moment maps do not match");
  }
  W00Point w{out.gs[0] * in.gs[0], in.x};
  validate(w);
  return w;
}

std::pair<Matrix, Matrix> u11_to_tstar(const UClass& m) {
  if (m.b != 1 || m.bprime != 1) throw SignatureError("u11_to_tstar: expects signature (1,1)");
  validate(m);
  return {m.gs[0] * m.gs[1], u_moment(m, 0)};
}

UClass tstar_to_u11(const Matrix& g, const Matrix& y) {
  require_invertible(g, "tstar_to_u11");
  const SlicePoint x = slice_representative(y);
  const Matrix g1 = regular_conjugator(slice_embed(x), y);
  return UClass{1, 1, {g1, g1.inverse() * g}, x};
}

bool sl_membership(const UClass& m, double tol) {
  validate(m);
  if (std::abs(slice_embed(m.x).trace()) > tol) return false;
  Complex det = 1.0;
  for (int i = 0; i < m.factors(); ++i) {
    const Complex d = m.gs[i].determinant();
    det *= m.incoming(i) ? d : 1.0 / d;
  }
  return std::abs(det - 1.0) <= tol;
}

FibrationData fibration_data(const UClass& m) {
  FibrationData data{m.x, {}};
  for (int i = 0; i < m.factors(); ++i) data.moments.push_back(u_moment(m, i));
  return data;
}

Matrix fibre_coordinate(const UClass& m1, const UClass& m2) {
  require_same_signature(m1, m2, "fibre_coordinate");
  if (!same_slice(m1.x, m2.x, 1e-9)) throw ValidationError("fibre_coordinate: slice parts differ");
  Matrix product = identity(m1.k());
  for (const auto& u : relating_elements(m1, m2)) product = product * u;
  return product;
}

int stabilizer_dimension(const UClass& m, int factor, bool sum_zero) {
  validate(m);
  require_factor(m, factor, "stabilizer_dimension");
  const int k = m.k();
  const int n = m.factors();
  const int kk = k * k;
  const auto basis = centralizer_basis(slice_embed(m.x));
  const int r = static_cast<int>(basis.size());
  const int rows = n * kk + (sum_zero ? kk : 0);
  const int cols = kk + n * r;
  Matrix system = Matrix::Zero(rows, cols);
  // xi on `factor` (in left-log coordinates) ...
  for (int c = 0; c < kk; ++c) {
    const Matrix xi = unit_matrix(k, c % k, c / k);
    const WTangent t = w_g_fundamental(m.factor_point(factor), xi);
    system.block(factor * kk, c, kk, 1) = vec(t.a);
  }
  // ... minus the A-direction sum_l r_il B_l on each factor
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < r; ++l) {
      Matrix a = basis[l];
      if (!m.incoming(i)) a = m.gs[i].inverse() * basis[l] * m.gs[i];
      system.block(i * kk, kk + i * r + l, kk, 1) = -vec(a);
      if (sum_zero) system.block(n * kk, kk + i * r + l, kk, 1) = vec(basis[l]);
    }
  }
  const Matrix kernel = null_space(system);
  if (kernel.cols() == 0) return 0;
  return numerical_rank(kernel.topRows(kk), 1e-8);
}

UClass u_phi_e(const UClass& m) {
  validate(m);
  if (m.b < 1) throw SignatureError("u_phi_e: needs an incoming factor");
  const WPoint moved = phi_e(m.factor_point(m.b - 1));
  UClass out;
  out.b = m.b - 1;
  out.bprime = m.bprime + 1;
  out.x = moved.x;
  for (int i = 0; i < m.b - 1; ++i) out.gs.push_back(m.gs[i]);
  for (int i = m.b; i < m.factors(); ++i) out.gs.push_back(m.gs[i]);
  out.gs.push_back(moved.g);
  return out;
}

}  // namespace mtv
