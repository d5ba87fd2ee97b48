#include "mtv/slodowy.hpp"

#include <cmath>

#include "mtv/errors.hpp"

namespace mtv {

PrincipalTriple principal_triple(int k) {
  if (k < 1) throw DimensionError("principal_triple: k must be positive");
  PrincipalTriple t{Matrix::Zero(k, k), Matrix::Zero(k, k), Matrix::Zero(k, k)};
  for (int i = 0; i + 1 < k; ++i) {
    t.e(i + 1, i) = 1.0;
    // [e, f] = h with h = diag(-(k-1), -(k-3), ..., k-1)
    t.f(i, i + 1) = static_cast<double>((i + 1) * (k - i - 1));
  }
  t.h = bracket(t.e, t.f);
  return t;
}

namespace {

std::vector<Matrix> f_powers(int k) {
  const Matrix f = principal_triple(k).f;
  std::vector<Matrix> powers{identity(k)};
  for (int j = 1; j < k; ++j) powers.push_back(powers.back() * f);
  return powers;
}

Matrix embed_with(const std::vector<Matrix>& powers, const Matrix& e, const Vector& c) {
  Matrix x = e;
  for (Eigen::Index j = 0; j < c.size(); ++j) x += c(j) * powers[j];
  return x;
}

}  // namespace

Matrix slice_embed(const SlicePoint& s) {
  const int k = s.k();
  if (k < 1) throw DimensionError("slice_embed: empty slice point");
  return embed_with(f_powers(k), principal_triple(k).e, s.coeffs);
}

Vector characteristic_coefficients(const Matrix& x) {
  require_square(x, "characteristic_coefficients");
  const auto k = x.rows();
  Vector a = Vector::Zero(k + 1);
  a(0) = 1.0;
  Matrix m = Matrix::Zero(k, k);
  const Matrix id = Matrix::Identity(k, k);
  for (Eigen::Index j = 1; j <= k; ++j) {
    m = x * m + a(j - 1) * id;
    a(j) = -(x * m).trace() / static_cast<double>(j);
  }
  return a;
}

SlicePoint slice_from_charpoly(const Vector& charpoly) {
  const int k = static_cast<int>(charpoly.size()) - 1;
  if (k < 1) throw DimensionError("slice_from_charpoly: need degree >= 1");
  const auto powers = f_powers(k);
  const Matrix e = principal_triple(k).e;
  // Under the grading by ad(h)/2 the coefficient a_m is quasi-homogeneous of
  // weight m and c_{m-1} has weight m, so a_m is affine in c_{m-1} once
  // c_0..c_{m-2} are fixed: solve one coefficient at a time.
  Vector c = Vector::Zero(k);
  for (int m = 1; m <= k; ++m) {
    c(m - 1) = 0.0;
    const Complex base = characteristic_coefficients(embed_with(powers, e, c))(m);
    c(m - 1) = 1.0;
    const Complex pivot = characteristic_coefficients(embed_with(powers, e, c))(m) - base;
    c(m - 1) = (charpoly(m) - base) / pivot;
  }
  return {c};
}

SlicePoint slice_representative(const Matrix& x) {
  require_square(x, "slice_representative");
  if (!is_regular(x)) throw RegularityError("slice_representative: matrix is not regular");
  return slice_from_charpoly(characteristic_coefficients(x));
}

std::pair<SlicePoint, double> slice_coordinates(const Matrix& x) {
  require_square(x, "slice_coordinates");
  const int k = static_cast<int>(x.rows());
  const auto powers = f_powers(k);
  const Matrix e = principal_triple(k).e;
  const Matrix rest = x - e;
  // the f^j live on disjoint superdiagonals, so projection is coordinatewise
  Vector c(k);
  for (int j = 0; j < k; ++j) {
    c(j) = (powers[j].conjugate().array() * rest.array()).sum() / powers[j].squaredNorm();
  }
  const double off = (x - embed_with(powers, e, c)).norm();
  return {SlicePoint{c}, off};
}

bool is_in_slice(const Matrix& x, double tol) {
  return slice_coordinates(x).second <= tol * (1.0 + x.norm());
}

Matrix slice_tangent(const Vector& dc) {
  const int k = static_cast<int>(dc.size());
  if (k < 1) throw DimensionError("slice_tangent: empty direction");
  const auto powers = f_powers(k);
  Matrix out = Matrix::Zero(k, k);
  for (int j = 0; j < k; ++j) out += dc(j) * powers[j];
  return out;
}

namespace {

std::vector<Vector> cyclic_candidates(int k) {
  std::vector<Vector> out;
  for (int i = 0; i < k; ++i) out.push_back(Vector::Unit(k, i));
  out.push_back(Vector::Ones(k));
  Vector v(k);
  for (int i = 0; i < k; ++i) {
    v(i) = Complex(std::cos(1.7 * i + 0.3), std::sin(2.3 * i + 1.1));
  }
  out.push_back(v);
  return out;
}

Matrix best_krylov(const Matrix& a) {
  const int k = static_cast<int>(a.rows());
  Matrix best;
  double best_cond = -1.0;
  for (const auto& v : cyclic_candidates(k)) {
    Matrix kr = krylov(a, v);
    // column scaling does not change whether the basis is cyclic
    for (Eigen::Index j = 0; j < kr.cols(); ++j) {
      const double n = kr.col(j).norm();
      if (n > 0) kr.col(j) /= n;
    }
    const double c = relative_min_singular_value(kr);
    if (c > best_cond) {
      best_cond = c;
      best = krylov(a, v);
    }
  }
  if (best_cond < 1e-12) throw RegularityError("regular_conjugator: no cyclic vector found");
  return best;
}

}  // namespace

Matrix regular_conjugator(const Matrix& from, const Matrix& to) {
  require_same_size(from, to, "regular_conjugator");
  // K_to C K_to^{-1} = to and K_from C K_from^{-1} = from with the same companion C
  const Matrix k_from = best_krylov(from);
  const Matrix k_to = best_krylov(to);
  const Matrix c_from = k_from.partialPivLu().solve(from * k_from);
  const Matrix c_to = k_to.partialPivLu().solve(to * k_to);
  if ((c_from - c_to).norm() > 1e-7 * (1.0 + c_from.norm())) {
    throw ValidationError("regular_conjugator: matrices are not conjugate");
  }
  return k_to * k_from.inverse();
}

}  // namespace mtv
