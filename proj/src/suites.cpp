#include "suites.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "mtv/errors.hpp"

namespace mtv::suites {

void Tally::residual(double r) {
  if (!std::isfinite(r)) {
    error("non-finite residual");
    return;
  }
  worst_ = std::max(worst_, r);
}

void Tally::require(bool ok, const std::string& what) {
  if (ok) return;
  if (failures_ == 0) detail_ = what;
  ++failures_;
}

void Tally::control(double r) {
  any_control_value_ = true;
  control_ = std::min(control_, std::isfinite(r) ? r : std::numeric_limits<double>::infinity());
}

void Tally::control_detected(bool detected, const std::string& what) {
  if (detected) return;
  if (failures_ == 0 && missed_ == 0) detail_ = "negative control not detected: " + what;
  ++missed_;
}

void Tally::error(const std::string& what) { require(false, what); }

void Tally::finish(SuiteResult& out) const {
  out.max_residual = worst_;
  out.control_residual = any_control_value_ ? control_ : 0.0;
  out.failures = failures_;
  out.controls_missed = missed_;
  out.detail = detail_;
  const bool controls_ok = missed_ == 0 && (!any_control_value_ || control_ > out.control_threshold);
  out.pass = failures_ == 0 && worst_ < out.tolerance && controls_ok;
  if (out.pass) {
    out.detail.clear();
  } else if (out.detail.empty()) {
    out.detail = worst_ >= out.tolerance ? "residual above tolerance" : "negative control residual too small";
  }
}

double relative_gap(Complex a, Complex b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double relative_gap(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max({1.0, a.norm(), b.norm()});
}

int pick_k(const SuiteConfig& config, int trial, int cap, int lo) {
  const int hi = std::max(1, std::min(config.k, cap));
  lo = std::min(lo, hi);
  return lo + trial % (hi - lo + 1);
}

std::vector<std::pair<int, int>> signatures(const SuiteConfig& config, int max_total) {
  std::vector<std::pair<int, int>> out;
  for (int total = 1; total <= max_total; ++total) {
    for (int b = 0; b <= total; ++b) {
      if (b <= config.b && total - b <= config.bprime) out.emplace_back(b, total - b);
    }
  }
  return out;
}

namespace {

template <class Body>
void run_trials(const std::string& suite, const SuiteConfig& config, int trials, Tally& tally, Body body) {
  for (int t = 0; t < trials; ++t) {
    Rng rng = trial_rng(config.seed, suite, t);
    try {
      body(t, rng);
    } catch (const Error& e) {
      tally.error("trial " + std::to_string(t) + ": " + e.what());
    }
  }
}

// p(A_1, ..., A_m) = (1/m!) sum over orderings of tr(A_s1 ... A_sm), the
// symmetric multilinear form of tr X^m
Complex symmetrized_trace(const std::vector<Matrix>& args) {
  std::vector<int> order(args.size());
  std::iota(order.begin(), order.end(), 0);
  Complex total = 0.0;
  double count = 0.0;
  do {
    Matrix product = args[order[0]];
    for (std::size_t i = 1; i < order.size(); ++i) product = product * args[order[i]];
    total += product.trace();
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  return total / count;
}

}  // namespace

void polarization(const SuiteConfig& config, SuiteResult& out) {
  Tally tally;
  out.tolerance = 1e-9;
  out.control_threshold = 1e-2;
  out.trials = config.trials;
  run_trials(out.name, config, config.trials, tally, [&](int t, Rng& rng) {
    const int k = pick_k(config, t, 5);
    const int m = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k));
    const Complex coefficient = sample_disc(rng);
    const Matrix x = sample_matrix(k, rng);
    const InvariantPolynomial p{m, coefficient};
    const Matrix c = polarized_gradient(p, x);
    double control = 0.0;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        const Matrix y = unit_matrix(k, i, j);
        std::vector<Matrix> args(m, x);
        args.back() = y;
        const Complex oracle = static_cast<double>(m) * coefficient * symmetrized_trace(args);
        tally.residual(relative_gap(pairing(c, y), oracle));
        // corrupted gradient: wrong degree factor
        control = std::max(control, relative_gap(pairing(c * (m + 1.0) / static_cast<double>(m), y), oracle));
      }
    }
    // [C_P(X), X] = 0 is held to 1e-10, rescaled onto the suite tolerance
    tally.residual(bracket(c, x).norm() / std::max(1.0, c.norm() * x.norm()) * (out.tolerance / 1e-10));
    tally.control(control);
  });
  tally.finish(out);
}

namespace {

ChartForm w_form(const WChart& chart) {
  return [chart](const Vector& x, const Vector& u, const Vector& v) {
    return w_symplectic(chart.point(x), chart.tangent(x, u), chart.tangent(x, v));
  };
}

ChartForm w_literal_form(const WChart& chart) {
  return [chart](const Vector& x, const Vector& u, const Vector& v) {
    return w_form_moment_wedge(chart.point(x), chart.tangent(x, u), chart.tangent(x, v));
  };
}

ChartForm u_form(const UChart& chart) {
  return [chart](const Vector& x, const Vector& u, const Vector& v) {
    return u_symplectic(chart.point(x), chart.tangent(x, u), chart.tangent(x, v));
  };
}

Vector sample_chart_vector(int n, Rng& rng) { return sample_vector(n, rng); }

// a Fitting-transverse (1,0) scheme whose pieces may share base points
JetScheme sample_fitting_scheme(int k, Rng& rng) {
  JetScheme d{k, 1, 0, {}};
  std::uniform_int_distribution<int> part(1, k);
  std::uniform_int_distribution<int> palette(0, 2);
  int left = k;
  while (left > 0) {
    LocalPiece p;
    p.length = std::min(left, part(rng));
    left -= p.length;
    p.z = Complex(0.5 * palette(rng), 0.0);
    p.jets.resize(1);
    for (int m = 0; m < p.length; ++m) p.jets[0].push_back(sample_vector(k, rng));
    d.pieces.push_back(p);
  }
  return d;
}

}  // namespace

void hamiltonian_w(const SuiteConfig& config, SuiteResult& out) {
  Tally tally;
  out.tolerance = 1e-5;
  out.control_threshold = 1e-2;
  out.trials = config.trials;
  run_trials(out.name, config, config.trials, tally, [&](int t, Rng& rng) {
    const int k = pick_k(config, t, 4);
    for (Orientation o : {Orientation::incoming, Orientation::outgoing}) {
      const WPoint p = sample_wpoint(k, o, rng);
      const WChart chart(p);
      const Vector x = chart.origin();
      const ChartForm omega = w_form(chart);
      const Vector v = sample_chart_vector(static_cast<int>(x.size()), rng);

      const Matrix xi = sample_matrix(k, rng);
      const Vector xi_sharp = chart.chart_tangent(w_g_fundamental(p, xi));
      const ChartMap mu = [chart](const Vector& y) { return w_moment(chart.point(y)); };
      double size = std::max(1.0, std::abs(omega(x, xi_sharp, v)));
      tally.residual(fd_moment_condition(omega, mu, x, xi_sharp, xi, v, config.fd_step) / size);
      tally.control(fd_moment_condition(omega, mu, x, xi_sharp, xi, v, config.fd_step, -1.0) / size);

      std::vector<InvariantPolynomial> poly;
      Vector coeffs = sample_vector(k, rng);
      for (int m = 1; m <= k; ++m) poly.push_back({m, coeffs(m - 1)});
      const Vector p_sharp = chart.chart_tangent(a_fundamental(poly, p));
      const ChartMap nu = [chart, coeffs](const Vector& y) {
        const Vector values = a_moment(chart.point(y));
        Matrix out(1, 1);
        out(0, 0) = (coeffs.array() * values.array()).sum();
        return out;
      };
      const Matrix one = Matrix::Identity(1, 1);
      size = std::max(1.0, std::abs(omega(x, p_sharp, v)));
      tally.residual(fd_moment_condition(omega, nu, x, p_sharp, one, v, config.fd_step) / size);
      tally.control(fd_moment_condition(omega, nu, x, p_sharp, one, v, config.fd_step, -1.0) / size);
    }
  });
  tally.finish(out);
}

void closedness(const SuiteConfig& config, SuiteResult& out) {
  Tally tally;
  out.tolerance = config.tol_fd;
  out.control_threshold = 1e-2;
  out.trials = config.trials;
  const auto sigs = signatures(config, config.b + config.bprime);
  const double h = config.fd_step;
  run_trials(out.name, config, config.trials, tally, [&](int t, Rng& rng) {
    const int k = pick_k(config, t, 3);
    // W^{1,0} and W^{0,1}
    for (Orientation o : {Orientation::incoming, Orientation::outgoing}) {
      const WChart chart(sample_wpoint(k, o, rng));
      const Vector x = chart.origin();
      const auto n = static_cast<int>(x.size());
      const Vector u = sample_chart_vector(n, rng), v = sample_chart_vector(n, rng), w = sample_chart_vector(n, rng);
      tally.residual(std::abs(fd_exterior_derivative(w_form(chart), x, u, v, w, h)));
    }
    // U^{b,b'}
    {
      const auto [b, bp] = sigs[t % sigs.size()];
      const UChart chart(sample_uclass(k, b, bp, rng));
      const Vector x = chart.origin();
      const auto n = static_cast<int>(x.size());
      const Vector u = sample_chart_vector(n, rng), v = sample_chart_vector(n, rng), w = sample_chart_vector(n, rng);
      tally.residual(std::abs(fd_exterior_derivative(u_form(chart), x, u, v, w, h)));
    }
    // F^{1,0}, base points possibly shared
    {
      const FChart chart(sample_fitting_scheme(k, rng));
      const Vector x = chart.origin();
      const auto n = static_cast<int>(x.size());
      const Vector u = sample_chart_vector(n, rng), v = sample_chart_vector(n, rng), w = sample_chart_vector(n, rng);
      tally.residual(std::abs(fd_exterior_derivative(chart.form(), x, u, v, w, h)));
    }
    // the literal moment-wedge expression is not closed once G is non-abelian
    {
      const int kc = std::max(2, k);
      const Orientation o = t % 2 == 0 ? Orientation::incoming : Orientation::outgoing;
      const WChart chart(sample_wpoint(kc, o, rng));
      const Vector x = chart.origin();
      const auto n = static_cast<int>(x.size());
      const Vector u = sample_chart_vector(n, rng), v = sample_chart_vector(n, rng), w = sample_chart_vector(n, rng);
      tally.control(std::abs(fd_exterior_derivative(w_literal_form(chart), x, u, v, w, h)));
    }
  });
  tally.finish(out);
}

namespace {

UTangent sample_utangent(const UClass& m, Rng& rng) {
  UTangent t{{}, sample_vector(m.k(), rng)};
  for (int i = 0; i < m.factors(); ++i) t.as.push_back(sample_matrix(m.k(), rng));
  return t;
}

}  // namespace

void form_identity(const SuiteConfig& config, SuiteResult& out) {
  Tally tally;
  out.tolerance = config.tol_alg;
  out.control_threshold = 1e-2;
  out.trials = config.trials;
  const int max_b = std::max(1, config.b + config.bprime);
  run_trials(out.name, config, config.trials, tally, [&](int t, Rng& rng) {
    const int k = pick_k(config, t, 5);
    const int b = 1 + t % max_b;
    const UClass m = sample_uclass(k, b, 0, rng);
    const UTangent u = sample_utangent(m, rng);
    const UTangent v = sample_utangent(m, rng);
    tally.residual(relative_gap(u_form_two_term(m, u, v, WedgeConvention::bracket), u_form_moment_wedge(m, u, v)));
    const WPoint p = m.factor_point(0);
    const WTangent wu{u.as[0], u.dc}, wv{v.as[0], v.dc};
    tally.residual(relative_gap(w_form_two_term(p, wu, wv, WedgeConvention::bracket), w_form_moment_wedge(p, wu, wv)));
    tally.residual(relative_gap(w_form_two_term(p, wu, wv, WedgeConvention::matrix_product), w_symplectic(p, wu, wv)));

    // the matrix-product reading differs from the literal expression for k >= 2
    const UClass mc = sample_uclass(std::max(2, k), b, 0, rng);
    const UTangent uc = sample_utangent(mc, rng);
    const UTangent vc = sample_utangent(mc, rng);
    tally.control(relative_gap(u_form_two_term(mc, uc, vc, WedgeConvention::matrix_product), u_form_moment_wedge(mc, uc, vc)));
  });
  tally.finish(out);
}

namespace {

Vector power_traces(const Matrix& mu) {
  const auto k = static_cast<int>(mu.rows());
  Vector v(k);
  for (int m = 1; m <= k; ++m) v(m - 1) = inv_poly_eval({m, 1.0}, mu);
  return v;
}

}  // namespace

void axiom_d(const SuiteConfig& config, SuiteResult& out) {
  Tally tally;
  out.tolerance = config.tol_alg;
  out.control_threshold = 1e-2;
  out.trials = config.trials;
  const auto sigs = signatures(config, 4);
  run_trials(out.name, config, config.trials, tally, [&](int t, Rng& rng) {
    const int k = pick_k(config, t, 5);
    const auto [b, bp] = sigs[t % sigs.size()];
    const UClass m = sample_uclass(k, b, bp, rng);
    // rounding in tr(mu^m) is proportional to |mu|^m, not to the trace itself
    double scale = 1.0;
    for (int i = 0; i < m.factors(); ++i) scale = std::max(scale, std::pow(u_moment(m, i).norm(), k));
    tally.residual(axiom_d_residual(m) / scale);

    // a factor sitting over a different slice point breaks the matching
    WPoint stray = m.factor_point(0);
    stray.x.coeffs += sample_vector(k, rng);
    Matrix mu = w_moment(stray);
    if (!m.incoming(0)) mu = -mu;
    Matrix mu0 = u_moment(m, 0);
    if (!m.incoming(0)) mu0 = -mu0;
    const Vector reference = power_traces(mu0);
    tally.control((power_traces(mu) - reference).cwiseAbs().maxCoeff() / std::max(1.0, reference.cwiseAbs().maxCoeff()));
  });
  tally.finish(out);
}

void gluing(const SuiteConfig& config, SuiteResult& out) {
  Tally tally;
  out.tolerance = 1e-9;
  out.trials = config.trials;
  run_trials(out.name, config, config.trials, tally, [&](int t, Rng& rng) {
    const int k = pick_k(config, t, 4);
    const SlicePoint x = sample_slice(k, rng);
    const Matrix xm = slice_embed(x);
    const int b1 = t % 2, bp1 = 1 + (t / 2) % 2, b2 = 1 + (t / 4) % 2, bp2 = (t / 8) % 2;
    UClass m1 = sample_uclass(k, b1, bp1, rng);
    UClass m2 = sample_uclass(k, b2, bp2, rng);
    m1.x = x;
    m2.x = x;
    const int p = static_cast<int>(rng() % static_cast<std::uint64_t>(bp1));
    const int q = static_cast<int>(rng() % static_cast<std::uint64_t>(b2));
    m2.gs[q] = m1.gs[b1 + p].inverse() * sample_centralizer(xm, rng);

    const int nb = b1 + b2 - 1, nbp = bp1 + bp2 - 1;
    if (nb + nbp == 0) {
      const W00Point w = w00_from_glue(m1.b == 1 ? m1 : m2, m1.b == 1 ? m2 : m1);
      validate(w);
      return;
    }
    const UClass glued = glue(m1, p, m2, q, 0);
    tally.require(glued.b == nb && glued.bprime == nbp, "glued signature");

    // re-gauging the inputs by A_0 does not change the output class
    const UClass r1 = a_action(sample_a0(xm, m1.factors(), rng), m1);
    const UClass r2 = a_action(sample_a0(xm, m2.factors(), rng), m2);
    tally.require(u_equivalent(glue(r1, p, r2, q, 0), glued, out.tolerance), "re-gauged inputs");
    for (int a = 1; a < nb + nbp; ++a) {
      tally.require(u_equivalent(glue(m1, p, m2, q, a), glued, out.tolerance), "centraliser redistribution");
    }

    // (1,1) glued to (1,0) is the (1,0) class (g1 g2 h, X)
    const UClass id = sample_uclass(k, 1, 1, rng);
    UClass target = sample_uclass(k, 1, 0, rng);
    target.x = id.x;
    target.gs[0] = id.gs[1].inverse() * sample_centralizer(slice_embed(id.x), rng);
    const UClass expected{1, 0, {id.gs[0] * id.gs[1] * target.gs[0]}, id.x};
    tally.require(u_equivalent(glue(id, 0, target, 0, 0), expected, out.tolerance), "(1,1) against (1,0)");

    // controls: unmatched moments are refused, a dropped centraliser factor is seen
    UClass bad = m2;
    bad.x.coeffs += sample_vector(k, rng);
    bool refused = false;
    try {
      glue(m1, p, bad, q, 0);
    } catch (const GluingError&) {
      refused = true;
    }
    tally.control_detected(refused, "unmatched moments accepted");
    UClass shifted = glued;
    const Matrix c = sample_centralizer(xm, rng);
    shifted.gs[0] = shifted.incoming(0) ? Matrix(shifted.gs[0] * c) : Matrix(c * shifted.gs[0]);
    tally.control_detected(!u_equivalent(shifted, glued, out.tolerance), "centraliser factor dropped");
  });
  tally.finish(out);
}

void cotangent_identification(const SuiteConfig& config, SuiteResult& out) {
  Tally tally;
  out.tolerance = 1e-9;
  out.trials = config.trials;
  run_trials(out.name, config, config.trials, tally, [&](int t, Rng& rng) {
    const int k = pick_k(config, t, 4);
    const UClass m = sample_uclass(k, 1, 1, rng);
    const auto [g, y] = u11_to_tstar(m);
    tally.require(is_regular(y), "image not regular");

    const UClass regauged = a_action(sample_a0(slice_embed(m.x), 2, rng), m);
    const auto [g2, y2] = u11_to_tstar(regauged);
    tally.residual(std::max(relative_gap(g, g2), relative_gap(y, y2)));

    tally.require(u_equivalent(tstar_to_u11(g, y), m, out.tolerance), "inverse round trip");

    // a different class has a different image
    const UClass other = sample_uclass(k, 1, 1, rng);
    const auto [g3, y3] = u11_to_tstar(other);
    const bool same_image = relative_gap(g, g3) < 1e-6 && relative_gap(y, y3) < 1e-6;
    tally.require(same_image == u_equivalent(m, other, out.tolerance), "injectivity");

    // control: composing the factors in the wrong order is not an inverse
    const int kc = std::max(2, k);
    const UClass mc = sample_uclass(kc, 1, 1, rng);
    const auto [gc, yc] = u11_to_tstar(mc);
    const UClass good = tstar_to_u11(gc, yc);
    const UClass wrong{1, 1, {good.gs[0], gc * good.gs[0].inverse()}, good.x};
    tally.control_detected(!u_equivalent(wrong, mc, out.tolerance), "wrong inverse accepted");
  });
  tally.finish(out);
}

void axiom_e(const SuiteConfig& config, SuiteResult& out) {
  Tally tally;
  out.tolerance = config.tol_alg;
  out.control_threshold = 1e-2;
  out.trials = config.trials;
  run_trials(out.name, config, config.trials, tally, [&](int t, Rng& rng) {
    const int k = pick_k(config, t, 4);
    const WPoint p = sample_wpoint(k, Orientation::incoming, rng);
    const Matrix g0 = sample_group(k, rng);
    const WPoint lhs = phi_e(w_g_action(p, g0));
    const WPoint rhs = w_g_action(phi_e(p), theta_twisted_group(g0));
    tally.residual(relative_gap(lhs.g, rhs.g));
    tally.residual((lhs.x.coeffs - rhs.x.coeffs).norm());
    tally.residual(relative_gap(w_moment(phi_e(p)), theta_twisted_algebra(w_moment(p))));
    const WPoint back = phi_e_inverse(phi_e(p));
    tally.residual(std::max(relative_gap(back.g, p.g), (back.x.coeffs - p.x.coeffs).norm()));

    // on U: the last incoming leg turns into an outgoing one
    const int b = 1 + t % 2;
    const UClass m = sample_uclass(k, b, t % 2, rng);
    const UClass turned = u_phi_e(m);
    tally.require(turned.b == b - 1 && turned.bprime == m.bprime + 1, "u_phi_e signature");
    tally.residual(relative_gap(u_moment(turned, turned.factors() - 1), theta_twisted_algebra(u_moment(m, b - 1))));

    // the opposite slice conjugates into the slice
    const Matrix pc = opposite_slice_conjugator(k);
    const PrincipalTriple tr = principal_triple(k);
    Matrix ft = identity(k);
    for (int j = 0; j < k; ++j) {
      const Matrix image = pc * (tr.e.transpose() + ft) * pc.inverse();
      tally.residual(slice_coordinates(image).second / (1.0 + image.norm()));
      ft = ft * tr.f.transpose();
    }

    // controls need a non-abelian group
    const int kc = std::max(2, k);
    const WPoint pcnt = sample_wpoint(kc, Orientation::incoming, rng);
    const Matrix h0 = sample_group(kc, rng);
    const WPoint bare = w_g_action(phi_e(pcnt), theta_group(h0));
    tally.control(relative_gap(phi_e(w_g_action(pcnt, h0)).g, bare.g));
    const PrincipalTriple tc = principal_triple(kc);
    tally.control(slice_coordinates(tc.e.transpose()).second / (1.0 + tc.e.norm()));
  });
  tally.finish(out);
}

namespace {

JetScheme jet_group_twist(const JetScheme& d, Rng& rng) {
  JetScheme out = d;
  for (auto& p : out.pieces) {
    const int n = static_cast<int>(p.jets.size());
    std::vector<Vector> lambdas;
    Vector product = Vector::Zero(p.length);
    product(0) = 1.0;
    for (int j = 0; j + 1 < n; ++j) {
      Vector s = 0.5 * sample_vector(p.length, rng);
      s(0) += 1.5;
      lambdas.push_back(s);
      Vector next = Vector::Zero(p.length);
      for (int a = 0; a < p.length; ++a) {
        for (int c = 0; a + c < p.length; ++c) next(a + c) += product(a) * s(c);
      }
      product = next;
    }
    // last factor gets the inverse series of the product
    Vector inv = Vector::Zero(p.length);
    inv(0) = 1.0 / product(0);
    for (int a = 1; a < p.length; ++a) {
      Complex acc = 0.0;
      for (int c = 1; c <= a; ++c) acc += product(c) * inv(a - c);
      inv(a) = -acc / product(0);
    }
    lambdas.push_back(inv);
    p = jet_group_action(p, lambdas);
  }
  return out;
}

double min_eigenvalue_gap(const Matrix& x) {
  const Vector ev = Eigen::ComplexEigenSolver<Matrix>(x, false).eigenvalues();
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    for (Eigen::Index j = i + 1; j < ev.size(); ++j) gap = std::min(gap, std::abs(ev(i) - ev(j)));
  }
  return gap;
}

}  // namespace

void hilbert_round_trip(const SuiteConfig& config, SuiteResult& out) {
  Tally tally;
  out.tolerance = 1e-9;
  out.trials = config.trials;
  const auto sigs = signatures(config, 3);
  run_trials(out.name, config, config.trials, tally, [&](int t, Rng& rng) {
    const int k = pick_k(config, t, 4);
    const auto [b, bp] = sigs[t % sigs.size()];
    const JetScheme d = sample_jetscheme(k, b, bp, rng);
    const UClass m = hilb_to_u(d);
    tally.require(jet_equivalent(u_to_hilb(m), d, 1e-7), "u_to_hilb o hilb_to_u");
    tally.require(u_equivalent(hilb_to_u(jet_group_twist(d, rng)), m, out.tolerance), "jet group not absorbed");

    UClass c = sample_uclass(k, b, bp, rng);
    while (min_eigenvalue_gap(slice_embed(c.x)) < 0.05) c.x = sample_slice(k, rng);
    tally.require(u_equivalent(hilb_to_u(u_to_hilb(c)), c, out.tolerance), "hilb_to_u o u_to_hilb");

    JetScheme moved = d;
    UClass expected = m;
    for (int j = 0; j < d.factors(); ++j) {
      const Matrix g0 = sample_group(k, rng);
      moved = jet_g_action(moved, j, g0);
      expected = g_action(expected, j, g0);
    }
    const UClass image = hilb_to_u(moved);
    tally.require(u_equivalent(image, expected, out.tolerance), "equivariance");
    for (int j = 0; j < d.factors(); ++j) tally.residual(relative_gap(u_moment(image, j), u_moment(expected, j)));
    tally.residual(relative_gap(fibre_coordinate(image, expected), identity(k)));

    JetScheme broken = d;
    broken.pieces[0].jets[0][0] += 0.1 * sample_vector(k, rng);
    tally.control_detected(!u_equivalent(hilb_to_u(broken), m, out.tolerance), "perturbed jet");
  });
  tally.finish(out);
}

namespace {

// conjugacy oracle: A and B are conjugate iff the intertwiners {Y : AY = YB}
// contain an invertible element, and then a random one is invertible
bool conjugate(const Matrix& a, const Matrix& b, Rng& rng) {
  const auto k = a.rows();
  const Matrix id = Matrix::Identity(k, k);
  Matrix op(k * k, k * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      op.block(i * k, j * k, k, k) = (i == j ? a : Matrix::Zero(k, k)) - b(j, i) * id;
    }
  }
  const Matrix kernel = null_space(op, 1e-9);
  if (kernel.cols() == 0) return false;
  const Matrix y = unvec(kernel * sample_vector(static_cast<int>(kernel.cols()), rng), static_cast<int>(k));
  return relative_min_singular_value(y) > 1e-8;
}

void enumerate_types(int k, int min_part, int min_z, std::vector<std::pair<int, int>>& current,
                     std::vector<std::vector<std::pair<int, int>>>& out) {
  if (k == 0) {
    out.push_back(current);
    return;
  }
  // parts listed in non-decreasing (length, palette index) order
  for (int l = min_part; l <= k; ++l) {
    for (int z = (l == min_part ? min_z : 0); z < 3; ++z) {
      current.emplace_back(l, z);
      enumerate_types(k - l, l, z, current, out);
      current.pop_back();
    }
  }
}

JetScheme scheme_of_type(const std::vector<std::pair<int, int>>& type, int k, Rng& rng) {
  JetScheme d{k, 1, 0, {}};
  const Matrix g = sample_group(k, rng);
  int col = 0;
  for (const auto& [l, z] : type) {
    LocalPiece p;
    p.z = Complex(static_cast<double>(z), 0.0);
    p.length = l;
    p.jets.resize(1);
    for (int m = 0; m < l; ++m) p.jets[0].push_back(g.col(col++));
    d.pieces.push_back(p);
  }
  return d;
}

int gram_rank(const JetScheme& d) {
  const int k = d.k;
  std::vector<FTangent> basis;
  for (int i = 0; i < k * k; ++i) basis.push_back({unit_matrix(k, i % k, i / k), Vector::Zero(k)});
  for (int i = 0; i < k; ++i) basis.push_back({Matrix::Zero(k, k), Vector::Unit(k, i).cast<Complex>()});
  const auto n = static_cast<Eigen::Index>(basis.size());
  Matrix gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) gram(i, j) = f_presymplectic(d, basis[i], basis[j]);
  }
  return numerical_rank(gram, 1e-9);
}

}  // namespace

void fitting_orbits(const SuiteConfig& config, SuiteResult& out) {
  Tally tally;
  out.tolerance = 1.0;
  int pairs = 0;
  for (int k = 1; k <= std::min(config.k, 3); ++k) {
    std::vector<std::vector<std::pair<int, int>>> types;
    std::vector<std::pair<int, int>> current;
    enumerate_types(k, 1, 0, current, types);
    std::vector<JetScheme> schemes;
    for (std::size_t i = 0; i < types.size(); ++i) {
      Rng rng = trial_rng(config.seed, out.name, static_cast<int>(100 * k + i));
      schemes.push_back(scheme_of_type(types[i], k, rng));
    }
    Rng rng = trial_rng(config.seed, out.name, k);
    for (std::size_t i = 0; i < schemes.size(); ++i) {
      try {
        const JetScheme& d = schemes[i];
        tally.require(locally_nondegenerate(d), "sampled scheme not locally nondegenerate");
        const bool has_kernel = gram_rank(d) < k * k + k;
        tally.require(has_kernel == (locally_nondegenerate(d) && !nondegenerate(d)), "presymplectic kernel");
        for (std::size_t j = 0; j < schemes.size(); ++j) {
          ++pairs;
          const bool conj = conjugate(f_moment(d, 0), f_moment(schemes[j], 0), rng);
          const bool same = orbit_invariant(d) == orbit_invariant(schemes[j]);
          tally.require(conj == same, "orbit bijection");
        }
        // controls: a shifted base point is a different orbit; a repeated jet vector is degenerate
        JetScheme shifted = d;
        shifted.pieces[0].z += 0.5;
        tally.control_detected(!conjugate(f_moment(d, 0), f_moment(shifted, 0), rng), "shifted eigenvalue");
        if (k >= 2) {
          JetScheme flat = d;
          flat = with_g_matrix(flat, 0, [&] {
            Matrix g = g_matrix(d, 0);
            g.col(1) = g.col(0);
            return g;
          }());
          tally.control_detected(!locally_nondegenerate(flat), "repeated jet vector");
        }
      } catch (const Error& e) {
        tally.error(e.what());
      }
    }
  }
  out.trials = pairs;
  tally.finish(out);
}

void free_action(const SuiteConfig& config, SuiteResult& out) {
  Tally tally;
  out.tolerance = 1.0;
  const auto sigs = signatures(config, config.b + config.bprime);
  out.trials = config.trials * static_cast<int>(sigs.size());
  run_trials(out.name, config, out.trials, tally, [&](int t, Rng& rng) {
    const auto [b, bp] = sigs[t % sigs.size()];
    const int k = pick_k(config, t / static_cast<int>(sigs.size()), 5);
    const UClass m = sample_uclass(k, b, bp, rng);
    for (int f = 0; f < m.factors(); ++f) {
      tally.require(stabilizer_dimension(m, f, true) == 0, "nontrivial stabiliser");
    }
    // without the sum-zero constraint the full centraliser stabilises
    tally.control_detected(stabilizer_dimension(m, 0, false) == k, "stabiliser without A_0 constraint");
  });
  tally.finish(out);
}

}  // namespace mtv::suites
