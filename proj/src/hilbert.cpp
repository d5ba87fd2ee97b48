#include "mtv/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "mtv/errors.hpp"

namespace mtv {

namespace {

using Series = std::vector<Complex>;

Series series_mul(const Series& a, const Series& b) {
  const std::size_t n = a.size();
  Series out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; i + j < n; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Series series_inverse(const Series& a) {
  const std::size_t n = a.size();
  Series out(n, 0.0);
  out[0] = 1.0 / a[0];
  for (std::size_t m = 1; m < n; ++m) {
    Complex s = 0.0;
    for (std::size_t i = 1; i <= m; ++i) s += a[i] * out[m - i];
    out[m] = -s / a[0];
  }
  return out;
}

std::vector<Vector> scale_jet(const std::vector<Vector>& jet, const Series& lambda) {
  std::vector<Vector> out;
  for (std::size_t m = 0; m < jet.size(); ++m) {
    Vector v = Vector::Zero(jet[m].size());
    for (std::size_t i = 0; i <= m; ++i) v += lambda[i] * jet[m - i];
    out.push_back(v);
  }
  return out;
}

int pivot_index(const Vector& v) {
  const double scale = v.norm();
  if (scale == 0.0 || !std::isfinite(scale)) throw DegeneracyError("jet_normalize: zero leading vector");
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12 * scale) return static_cast<int>(i);
  }
  return 0;
}

std::vector<Complex> base_points(const JetScheme& d) {
  std::vector<Complex> zs;
  for (const auto& p : d.pieces) zs.push_back(p.z);
  return zs;
}

std::vector<int> lengths(const JetScheme& d) {
  std::vector<int> ls;
  for (const auto& p : d.pieces) ls.push_back(p.length);
  return ls;
}

Matrix jordan_matrix(const std::vector<Complex>& zs, const std::vector<int>& ls) {
  const int k = std::accumulate(ls.begin(), ls.end(), 0);
  Matrix j = Matrix::Zero(k, k);
  int o = 0;
  for (std::size_t p = 0; p < zs.size(); ++p) {
    for (int i = 0; i < ls[p]; ++i) {
      j(o + i, o + i) = zs[p];
      if (i + 1 < ls[p]) j(o + i, o + i + 1) = 1.0;
    }
    o += ls[p];
  }
  return j;
}

// reverses the basis inside each Jordan block, so that W J W = J^T
Matrix block_reversal(const std::vector<int>& ls) {
  const int k = std::accumulate(ls.begin(), ls.end(), 0);
  Matrix w = Matrix::Zero(k, k);
  int o = 0;
  for (int l : ls) {
    for (int i = 0; i < l; ++i) w(o + i, o + l - 1 - i) = 1.0;
    o += l;
  }
  return w;
}

bool piece_less(const LocalPiece& a, const LocalPiece& b) {
  return std::make_tuple(a.z.real(), a.z.imag(), a.length) <
         std::make_tuple(b.z.real(), b.z.imag(), b.length);
}

}  // namespace

LocalPiece jet_group_action(const LocalPiece& piece, const std::vector<Vector>& lambdas) {
  if (lambdas.size() != piece.jets.size()) throw DimensionError("jet_group_action: one series per factor");
  LocalPiece out = piece;
  for (std::size_t j = 0; j < piece.jets.size(); ++j) {
    if (lambdas[j].size() != piece.length) throw DimensionError("jet_group_action: series has the wrong length");
    Series s(lambdas[j].data(), lambdas[j].data() + lambdas[j].size());
    out.jets[j] = scale_jet(piece.jets[j], s);
  }
  return out;
}

LocalPiece jet_normalize(const LocalPiece& piece) {
  const std::size_t n = piece.jets.size();
  if (n == 0) throw ValidationError("jet_normalize: piece has no factors");
  for (const auto& jet : piece.jets) {
    if (static_cast<int>(jet.size()) != piece.length) throw ValidationError("jet_normalize: jet length mismatch");
    pivot_index(jet[0]);
  }
  if (n == 1) return piece;
  LocalPiece out = piece;
  Series absorbed(piece.length, 0.0);
  absorbed[0] = 1.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const int p = pivot_index(piece.jets[j][0]);
    Series s;
    for (const auto& v : piece.jets[j]) s.push_back(v(p));
    out.jets[j] = scale_jet(piece.jets[j], series_inverse(s));
    absorbed = series_mul(absorbed, s);
  }
  out.jets[n - 1] = scale_jet(piece.jets[n - 1], absorbed);
  return out;
}

JetScheme jet_normalize(const JetScheme& d) {
  JetScheme out = d;
  for (auto& p : out.pieces) p = jet_normalize(p);
  return out;
}

bool fitting_transverse(const JetScheme& d) {
  if (d.k < 1) throw ValidationError("JetScheme: k must be positive");
  if (d.b < 0 || d.bprime < 0 || d.factors() < 1) throw ValidationError("JetScheme: bad signature");
  int total = 0;
  for (const auto& p : d.pieces) {
    if (p.length < 1) throw ValidationError("JetScheme: piece length must be positive");
    if (!std::isfinite(p.z.real()) || !std::isfinite(p.z.imag())) throw ValidationError("JetScheme: non-finite base point");
    if (static_cast<int>(p.jets.size()) != d.factors()) throw ValidationError("JetScheme: piece is missing factor jets");
    for (const auto& jet : p.jets) {
      if (static_cast<int>(jet.size()) != p.length) throw ValidationError("JetScheme: jet has the wrong number of coefficients");
      for (const auto& v : jet) {
        if (v.size() != d.k) throw ValidationError("JetScheme: jet vector has the wrong size");
        if (!v.allFinite()) throw ValidationError("JetScheme: non-finite jet vector");
      }
    }
    total += p.length;
  }
  if (total != d.k) throw ValidationError("JetScheme: lengths do not add up to k");
  return true;
}

bool is_transverse(const JetScheme& d, double tol) {
  for (std::size_t i = 0; i < d.pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < d.pieces.size(); ++j) {
      if (std::abs(d.pieces[i].z - d.pieces[j].z) <= tol) return false;
    }
  }
  return true;
}

Matrix g_matrix(const JetScheme& d, int j) {
  fitting_transverse(d);
  if (j < 0 || j >= d.factors()) throw DimensionError("g_matrix: factor index out of range");
  Matrix g(d.k, d.k);
  int col = 0;
  for (const auto& p : d.pieces) {
    for (const auto& v : p.jets[j]) g.col(col++) = v;
  }
  return g;
}

JetScheme with_g_matrix(const JetScheme& d, int j, const Matrix& g) {
  fitting_transverse(d);
  if (j < 0 || j >= d.factors()) throw DimensionError("with_g_matrix: factor index out of range");
  if (g.rows() != d.k || g.cols() != d.k) throw DimensionError("with_g_matrix: wrong size");
  JetScheme out = d;
  int col = 0;
  for (auto& p : out.pieces) {
    for (auto& v : p.jets[j]) v = g.col(col++);
  }
  return out;
}

JetScheme with_base_points(const JetScheme& d, const Vector& zs) {
  if (zs.size() != static_cast<Eigen::Index>(d.pieces.size())) throw DimensionError("with_base_points: one point per piece");
  JetScheme out = d;
  for (std::size_t i = 0; i < out.pieces.size(); ++i) out.pieces[i].z = zs(i);
  return out;
}

JetScheme jet_g_action(const JetScheme& d, int j, const Matrix& g0) {
  require_invertible(g0, "jet_g_action");
  const Matrix g = g_matrix(d, j);
  return with_g_matrix(d, j, d.incoming(j) ? Matrix(g0 * g) : Matrix(g0.transpose().inverse() * g));
}

int stabilizer_dimension(const JetScheme& d, int j) {
  // xi G_j = 0 has a k (k - rank G_j)-dimensional solution space
  return d.k * (d.k - numerical_rank(g_matrix(d, j)));
}

bool locally_nondegenerate(const JetScheme& d) {
  fitting_transverse(d);
  for (int j = 0; j < d.factors(); ++j) {
    if (stabilizer_dimension(d, j) != 0) return false;
  }
  return true;
}

bool nondegenerate(const JetScheme& d) {
  return locally_nondegenerate(d) && is_transverse(d);
}

Matrix jordan_of(const JetScheme& d) {
  fitting_transverse(d);
  return jordan_matrix(base_points(d), lengths(d));
}

JordanConjugator jordan_conjugator(const std::vector<Complex>& zs, const std::vector<int>& ls) {
  if (zs.size() != ls.size() || zs.empty()) throw DimensionError("jordan_conjugator: bad Jordan data");
  const Matrix j = jordan_matrix(zs, ls);
  const int k = static_cast<int>(j.rows());

  Series charpoly{1.0};
  for (std::size_t p = 0; p < zs.size(); ++p) {
    for (int i = 0; i < ls[p]; ++i) {
      Series next(charpoly.size() + 1, 0.0);
      for (std::size_t c = 0; c < charpoly.size(); ++c) {
        next[c] += charpoly[c];
        next[c + 1] -= zs[p] * charpoly[c];
      }
      charpoly = next;
    }
  }
  Vector coeffs(k + 1);
  for (int i = 0; i <= k; ++i) coeffs(i) = charpoly[i];
  const SlicePoint x = slice_from_charpoly(coeffs);
  const Matrix xm = slice_embed(x);

  Vector v_j = Vector::Zero(k);
  Vector e1 = Vector::Zero(k);
  e1(0) = 1.0;
  int o = 0;
  for (int l : ls) {
    o += l;
    v_j(o - 1) = 1.0;
  }
  const Matrix kj = krylov(j, v_j);
  if (relative_min_singular_value(kj) < 1e-13) {
    throw DegeneracyError("jordan_conjugator: Jordan data is not regular");
  }
  // the block scaling q_i(z_i)^{1/2}, q_i = prod_{j != i} (t - z_j)^{l_j}, makes
  // <J, T^{-1} dT> closed in the base points
  Vector scale(k);
  o = 0;
  for (std::size_t p = 0; p < zs.size(); ++p) {
    Complex q = 1.0;
    for (std::size_t r = 0; r < zs.size(); ++r) {
      if (r != p) q *= std::pow(zs[p] - zs[r], ls[r]);
    }
    for (int i = 0; i < ls[p]; ++i) scale(o + i) = std::sqrt(q);
    o += ls[p];
  }
  const Matrix t = krylov(xm, e1) * kj.inverse() * scale.asDiagonal();
  if ((t * j - xm * t).norm() > 1e-8 * (1.0 + t.norm()) * (1.0 + xm.norm())) {
    throw ConditioningError("jordan_conjugator: conjugation lost accuracy");
  }
  return {t, x};
}

UClass hilb_to_u(const JetScheme& d) {
  if (!nondegenerate(d)) throw DegeneracyError("hilb_to_u: scheme is not nondegenerate");
  const auto ls = lengths(d);
  const JordanConjugator jc = jordan_conjugator(base_points(d), ls);
  const Matrix t_inv = jc.t.inverse();
  const Matrix w = block_reversal(ls);
  UClass m;
  m.b = d.b;
  m.bprime = d.bprime;
  m.x = jc.x;
  for (int j = 0; j < d.factors(); ++j) {
    const Matrix g = g_matrix(d, j);
    m.gs.push_back(d.incoming(j) ? Matrix(g * t_inv) : Matrix(jc.t * w * g.transpose()));
  }
  return m;
}

JetScheme u_to_hilb(const UClass& m) {
  validate(m);
  const int k = m.k();
  const Matrix x = slice_embed(m.x);
  Eigen::ComplexEigenSolver<Matrix> solver(x, false);
  const Vector lambda = solver.eigenvalues();

  // double roots of a double-precision characteristic polynomial split by
  // about eps^{1/l}, so eigenvalues are grouped with a generous radius
  const double radius = 1e-3 * (1.0 + lambda.cwiseAbs().maxCoeff());
  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (std::abs(lambda(i) - lambda(j)) < radius) parent[find(i)] = find(j);
    }
  }
  std::vector<LocalPiece> pieces;
  std::vector<int> root_of;
  for (int i = 0; i < k; ++i) {
    const int r = find(i);
    auto it = std::find(root_of.begin(), root_of.end(), r);
    if (it == root_of.end()) {
      root_of.push_back(r);
      pieces.push_back({lambda(i), 1, {}});
    } else {
      auto& p = pieces[it - root_of.begin()];
      p.z += lambda(i);
      ++p.length;
    }
  }
  for (auto& p : pieces) p.z /= static_cast<double>(p.length);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      if (std::abs(pieces[i].z - pieces[j].z) < 10.0 * radius) {
        throw ConditioningError("u_to_hilb: eigenvalue clusters are not separated");
      }
    }
  }
  std::sort(pieces.begin(), pieces.end(), piece_less);

  std::vector<Complex> zs;
  std::vector<int> ls;
  for (const auto& p : pieces) {
    zs.push_back(p.z);
    ls.push_back(p.length);
  }
  const JordanConjugator jc = jordan_conjugator(zs, ls);
  const Matrix w = block_reversal(ls);
  const Matrix t_inv = jc.t.inverse();

  JetScheme d{k, m.b, m.bprime, pieces};
  for (auto& p : d.pieces) p.jets.assign(m.factors(), std::vector<Vector>(p.length, Vector::Zero(k)));
  for (int j = 0; j < m.factors(); ++j) {
    const Matrix g = d.incoming(j) ? Matrix(m.gs[j] * jc.t) : Matrix((w * t_inv * m.gs[j]).transpose());
    d = with_g_matrix(d, j, g);
  }
  return jet_normalize(d);
}

JetScheme sorted_pieces(const JetScheme& d) {
  JetScheme out = d;
  std::stable_sort(out.pieces.begin(), out.pieces.end(), piece_less);
  return out;
}

bool jet_equivalent(const JetScheme& d1, const JetScheme& d2, double tol) {
  fitting_transverse(d1);
  fitting_transverse(d2);
  if (d1.k != d2.k || d1.b != d2.b || d1.bprime != d2.bprime || d1.pieces.size() != d2.pieces.size()) {
    return false;
  }
  const JetScheme a = jet_normalize(sorted_pieces(d1));
  const JetScheme b = jet_normalize(sorted_pieces(d2));
  for (std::size_t i = 0; i < a.pieces.size(); ++i) {
    const auto& p = a.pieces[i];
    const auto& q = b.pieces[i];
    if (p.length != q.length || std::abs(p.z - q.z) > tol * (1.0 + std::abs(p.z))) return false;
    for (std::size_t j = 0; j < p.jets.size(); ++j) {
      for (int m = 0; m < p.length; ++m) {
        const Vector& u = p.jets[j][m];
        if ((u - q.jets[j][m]).norm() > tol * (1.0 + u.norm())) return false;
      }
    }
  }
  return true;
}

Matrix f_moment(const JetScheme& d, int j) {
  const Matrix g = g_matrix(d, j);
  if (relative_min_singular_value(g) < kRankTol) throw DegeneracyError("f_moment: jets are linearly dependent");
  const Matrix jm = jordan_of(d);
  if (d.incoming(j)) return g * jm * g.inverse();
  return -(g.transpose().inverse() * jm.transpose() * g.transpose());
}

Matrix f_eigen_direction(const JetScheme& d, const Vector& dz) {
  fitting_transverse(d);
  if (dz.size() != d.k) throw DimensionError("f_eigen_direction: one coordinate per diagonal entry");
  Matrix out = Matrix::Zero(d.k, d.k);
  int o = 0;
  for (const auto& p : d.pieces) {
    for (int j = 0; j < p.length; ++j) {
      for (int i = 0; i + j < p.length; ++i) out(o + i + j, o + i) = dz(o + j);
    }
    o += p.length;
  }
  return out;
}

Complex presymplectic_form(const Matrix& g, const Matrix& j, const Matrix& rho_u, const Matrix& dj_u,
                           const Matrix& rho_v, const Matrix& dj_v) {
  const auto k = j.rows();
  if (g.rows() != k || rho_u.rows() != k || rho_v.rows() != k || dj_u.rows() != k || dj_v.rows() != k) {
    throw DimensionError("presymplectic_form: sizes differ");
  }
  const Matrix g_inv = g.inverse();
  const Matrix mu = g * j * g_inv;
  return pairing(rho_u, bracket(rho_v, mu)) + pairing(rho_u, g * dj_v * g_inv) - pairing(rho_v, g * dj_u * g_inv);
}

Complex f_presymplectic(const JetScheme& d, const FTangent& u, const FTangent& v) {
  if (d.b != 1 || d.bprime != 0) throw SignatureError("f_presymplectic: defined on signature (1,0)");
  if (!locally_nondegenerate(d)) throw DegeneracyError("f_presymplectic: scheme is not locally nondegenerate");
  if (u.rho.rows() != d.k || v.rho.rows() != d.k) throw DimensionError("f_presymplectic: rho has the wrong size");
  return presymplectic_form(g_matrix(d, 0), jordan_of(d), u.rho, f_eigen_direction(d, u.dz), v.rho,
                            f_eigen_direction(d, v.dz));
}

std::vector<std::pair<Complex, int>> orbit_invariant(const JetScheme& d) {
  fitting_transverse(d);
  std::vector<std::pair<Complex, int>> out;
  for (const auto& p : d.pieces) out.emplace_back(p.z, p.length);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(a.first.real(), a.first.imag(), a.second) <
           std::make_tuple(b.first.real(), b.first.imag(), b.second);
  });
  return out;
}

}  // namespace mtv
