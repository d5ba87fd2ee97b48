#include "mtv/mt_w.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "mtv/errors.hpp"

namespace mtv {

void validate(const WPoint& p) {
  require_invertible(p.g, "WPoint.g");
  if (p.g.rows() != p.k()) throw DimensionError("WPoint: group element and slice point sizes differ");
}

namespace {

void require_tangent(const WPoint& p, const WTangent& t) {
  if (t.a.rows() != p.k() || t.a.cols() != p.k() || t.dc.size() != p.k()) {
    throw DimensionError("WTangent: size does not match the point");
  }
}

}  // namespace

Matrix w_moment(const WPoint& p) {
  validate(p);
  const Matrix x = slice_embed(p.x);
  if (p.orientation == Orientation::incoming) return p.g * x * p.g.inverse();
  return -(p.g.inverse() * x * p.g);
}

Complex w_symplectic(const WPoint& p, const WTangent& u, const WTangent& v) {
  require_tangent(p, u);
  require_tangent(p, v);
  const Matrix x = slice_embed(p.x);
  const Matrix dxu = slice_tangent(u.dc);
  const Matrix dxv = slice_tangent(v.dc);
  if (p.orientation == Orientation::incoming) {
    return pairing(u.a, dxv) - pairing(v.a, dxu) + pairing(x, bracket(u.a, v.a));
  }
  const Matrix ginv = p.g.inverse();
  const Matrix ru = p.g * u.a * ginv;
  const Matrix rv = p.g * v.a * ginv;
  return pairing(ru, dxv) - pairing(rv, dxu) - pairing(x, bracket(ru, rv));
}

Complex w_form_two_term(const WPoint& p, const WTangent& u, const WTangent& v,
                        WedgeConvention convention) {
  if (p.orientation != Orientation::incoming) {
    throw SignatureError("w_form_two_term: defined on the incoming block only");
  }
  require_tangent(p, u);
  require_tangent(p, v);
  const Matrix x = slice_embed(p.x);
  const Matrix dxu = slice_tangent(u.dc);
  const Matrix dxv = slice_tangent(v.dc);
  const Complex first = -(pairing(dxu, v.a) - pairing(dxv, u.a));
  Complex second;
  if (convention == WedgeConvention::matrix_product) {
    second = pairing(x, u.a * v.a - v.a * u.a);
  } else {
    second = pairing(x, bracket(u.a, v.a)) - pairing(x, bracket(v.a, u.a));
  }
  return first + second;
}

Complex w_form_moment_wedge(const WPoint& p, const WTangent& u, const WTangent& v) {
  require_tangent(p, u);
  require_tangent(p, v);
  const Matrix x = slice_embed(p.x);
  const Matrix g = p.g;
  const Matrix ginv = g.inverse();
  const Matrix dxu = slice_tangent(u.dc);
  const Matrix dxv = slice_tangent(v.dc);
  if (p.orientation == Orientation::incoming) {
    // phi = dg g^{-1} = g a g^{-1},  psi = d(g X g^{-1}) = g (dX + [a, X]) g^{-1}
    const Matrix phi_u = g * u.a * ginv;
    const Matrix phi_v = g * v.a * ginv;
    const Matrix psi_u = g * (dxu + bracket(u.a, x)) * ginv;
    const Matrix psi_v = g * (dxv + bracket(v.a, x)) * ginv;
    return pairing(phi_u, psi_v) - pairing(phi_v, psi_u);
  }
  // phi = g^{-1} dg = a,  psi = d(g^{-1} X g) = g^{-1} dX g + [g^{-1} X g, a]
  const Matrix nu = ginv * x * g;
  const Matrix psi_u = ginv * dxu * g + bracket(nu, u.a);
  const Matrix psi_v = ginv * dxv * g + bracket(nu, v.a);
  return pairing(u.a, psi_v) - pairing(v.a, psi_u);
}

WPoint w_g_action(const WPoint& p, const Matrix& g0) {
  require_invertible(g0, "w_g_action");
  WPoint out = p;
  out.g = p.orientation == Orientation::incoming ? Matrix(g0 * p.g) : Matrix(p.g * g0.inverse());
  return out;
}

WTangent w_g_fundamental(const WPoint& p, const Matrix& xi) {
  WTangent t{Matrix(), Vector::Zero(p.k())};
  if (p.orientation == Orientation::incoming) {
    t.a = p.g.inverse() * xi * p.g;  // d/dt exp(t xi) g
  } else {
    t.a = -xi;  // d/dt g exp(-t xi)
  }
  return t;
}

WPoint a_action(std::span<const InvariantPolynomial> poly, const WPoint& p) {
  const Matrix c = polarized_gradient(poly, slice_embed(p.x));
  const Matrix ec = matrix_exp(c);
  WPoint out = p;
  out.g = p.orientation == Orientation::incoming ? Matrix(p.g * ec) : Matrix(ec * p.g);
  return out;
}

WTangent a_fundamental(std::span<const InvariantPolynomial> poly, const WPoint& p) {
  const Matrix c = polarized_gradient(poly, slice_embed(p.x));
  WTangent t{c, Vector::Zero(p.k())};
  if (p.orientation == Orientation::outgoing) t.a = p.g.inverse() * c * p.g;
  return t;
}

Vector a_moment(const WPoint& p) {
  const Matrix x = slice_embed(p.x);
  const int k = p.k();
  Vector out(k);
  for (int m = 1; m <= k; ++m) out(m - 1) = inv_poly_eval({m, 1.0}, x);
  return out;
}

Matrix theta_algebra(const Matrix& x) {
  require_square(x, "theta_algebra");
  return -x.transpose();
}

Matrix theta_group(const Matrix& g) {
  require_invertible(g, "theta_group");
  return g.inverse().transpose();
}

namespace {

Matrix solve_opposite_conjugator(int k) {
  const PrincipalTriple t = principal_triple(k);
  const Matrix id = identity(k);
  // vec(P A) = (A^T (x) I) vec(P),  vec(B P) = (I (x) B) vec(P)
  auto right = [&](const Matrix& a) {
    Matrix op(k * k, k * k);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < k; ++i) op.block(i * k, j * k, k, k) = a(j, i) * id;
    return op;
  };
  auto left = [&](const Matrix& b) {
    Matrix op = Matrix::Zero(k * k, k * k);
    for (int i = 0; i < k; ++i) op.block(i * k, i * k, k, k) = b;
    return op;
  };
  Matrix system(2 * k * k, k * k);
  system.topRows(k * k) = right(t.e.transpose()) - left(t.e);
  system.bottomRows(k * k) = right(t.f.transpose()) - left(t.f);
  const Matrix kernel = null_space(system);
  if (kernel.cols() != 1) {
    throw Error("opposite_slice_conjugator: conjugation constraints do not have a 1-dimensional solution");
  }
  Matrix p = unvec(kernel.col(0), k);
  const double scale = p.cwiseAbs().maxCoeff();
  Eigen::Index pivot = 0;
  while (std::abs(p(pivot, 0)) <= 1e-8 * scale) ++pivot;
  p /= p(pivot, 0);
  // the solution is a signed permutation up to rounding; store it exactly
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      const Complex z = p(i, j);
      const Complex snapped(std::round(z.real()), std::round(z.imag()));
      if (std::abs(z - snapped) < 1e-12) p(i, j) = snapped;
    }
  }
  return p;
}

}  // namespace

Matrix opposite_slice_conjugator(int k) {
  if (k < 1) throw DimensionError("opposite_slice_conjugator: k must be positive");
  static std::mutex mutex;
  static std::map<int, Matrix> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, solve_opposite_conjugator(k)).first;
  return it->second;
}

Matrix theta_twisted_algebra(const Matrix& x) {
  const Matrix p = opposite_slice_conjugator(static_cast<int>(x.rows()));
  return p * theta_algebra(x) * p.inverse();
}

Matrix theta_twisted_group(const Matrix& g) {
  const Matrix p = opposite_slice_conjugator(static_cast<int>(g.rows()));
  return p * theta_group(g) * p.inverse();
}

namespace {

SlicePoint exact_slice_part(const Matrix& y) {
  auto [s, off] = slice_coordinates(y);
  if (off > 1e-12 * (1.0 + y.norm())) {
    throw Error("phi_e: image left the slice (residual " + std::to_string(off) + ")");
  }
  return s;
}

}  // namespace

WPoint phi_e(const WPoint& in) {
  if (in.orientation != Orientation::incoming) throw SignatureError("phi_e: expects an incoming point");
  validate(in);
  const Matrix p = opposite_slice_conjugator(in.k());
  const Matrix pinv = p.inverse();
  WPoint out;
  out.orientation = Orientation::outgoing;
  out.x = exact_slice_part(-(p * theta_algebra(slice_embed(in.x)) * pinv));
  out.g = p * theta_group(in.g).inverse() * pinv;
  return out;
}

WPoint phi_e_inverse(const WPoint& out) {
  if (out.orientation != Orientation::outgoing) {
    throw SignatureError("phi_e_inverse: expects an outgoing point");
  }
  validate(out);
  const Matrix p = opposite_slice_conjugator(out.k());
  const Matrix pinv = p.inverse();
  WPoint in;
  in.orientation = Orientation::incoming;
  in.x = exact_slice_part(-theta_algebra(pinv * slice_embed(out.x) * p));
  in.g = theta_group(pinv * out.g * p).inverse();
  return in;
}

}  // namespace mtv
