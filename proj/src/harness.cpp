#include "mtv/harness.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "mtv/errors.hpp"
#include "suites.hpp"

namespace mtv {

namespace {

constexpr const char* kVersion = "0.1.0";

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

using SuiteFn = void (*)(const SuiteConfig&, SuiteResult&);

struct Entry {
  const char* name;
  SuiteFn run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      {"polarization", suites::polarization},
      {"hamiltonian_w", suites::hamiltonian_w},
      {"closedness", suites::closedness},
      {"form_identity", suites::form_identity},
      {"axiom_d", suites::axiom_d},
      {"gluing", suites::gluing},
      {"theorem_2_4_i", suites::cotangent_identification},
      {"axiom_e", suites::axiom_e},
      {"hilbert_round_trip", suites::hilbert_round_trip},
      {"fitting_orbits", suites::fitting_orbits},
      {"free_action", suites::free_action},
  };
  return entries;
}

std::vector<std::string> expand(const std::vector<std::string>& requested) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& name : requested) {
    if (name == "all") {
      for (const auto& n : suite_names()) {
        if (seen.insert(n).second) out.push_back(n);
      }
    } else if (seen.insert(name).second) {
      out.push_back(name);
    }
  }
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& e : registry()) n.emplace_back(e.name);
    return n;
  }();
  return names;
}

void validate(const SuiteConfig& c) {
  if (c.k < 1) throw UsageError("config: k must be at least 1");
  if (c.b < 0 || c.bprime < 0 || c.b + c.bprime < 1) throw UsageError("config: need b, b' >= 0 and b + b' >= 1");
  if (c.trials < 1) throw UsageError("config: trials must be at least 1");
  if (!(c.tol_alg > 0.0) || !(c.tol_fd > 0.0)) throw UsageError("config: tolerances must be positive");
  if (!(c.fd_step > 0.0) || c.fd_step * c.fd_step <= std::numeric_limits<double>::epsilon()) {
    throw UsageError("config: fd_step squared must exceed machine epsilon");
  }
  if (c.suites.empty()) throw UsageError("config: empty suite list");
  for (const auto& name : c.suites) {
    if (name == "all") continue;
    bool known = false;
    for (const auto& n : suite_names()) known = known || n == name;
    if (!known) throw UsageError("config: unknown suite '" + name + "'");
  }
}

SuiteResult run_one_suite(const std::string& name, const SuiteConfig& config) {
  for (const auto& e : registry()) {
    if (name != e.name) continue;
    SuiteResult out;
    out.name = name;
    const auto start = std::chrono::steady_clock::now();
    e.run(config, out);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }
  throw UsageError("unknown suite '" + name + "'");
}

Report run_suite(const SuiteConfig& config) {
  validate(config);
  Report report{config, {}, true};
  for (const auto& name : expand(config.suites)) {
    report.suites.push_back(run_one_suite(name, config));
    report.pass = report.pass && report.suites.back().pass;
  }
  return report;
}

Json to_json(const SuiteConfig& c) {
  return {{"k", c.k}, {"b", c.b}, {"bprime", c.bprime}, {"trials", c.trials}, {"seed", c.seed},
          {"tol_alg", c.tol_alg}, {"tol_fd", c.tol_fd}, {"fd_step", c.fd_step}, {"suites", c.suites}};
}

Json to_json(const SuiteResult& r) {
  auto finite = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return {{"name", r.name},
          {"trials", r.trials},
          {"max_residual", finite(r.max_residual)},
          {"tolerance", r.tolerance},
          {"control_residual", finite(r.control_residual)},
          {"control_threshold", r.control_threshold},
          {"failures", r.failures},
          {"controls_missed", r.controls_missed},
          {"pass", r.pass},
          {"seconds", r.seconds},
          {"detail", r.detail}};
}

Json to_json(const Report& report) {
  Json suites = Json::array();
  for (const auto& s : report.suites) suites.push_back(to_json(s));
  return {{"version", kVersion},
          {"config", to_json(report.config)},
          {"suites", suites},
          {"status", report.pass ? "pass" : "fail"}};
}

Rng trial_rng(std::uint64_t seed, const std::string& suite, int trial) {
  const std::uint64_t h = splitmix64(splitmix64(seed) ^ fnv1a(suite)) ^ splitmix64(static_cast<std::uint64_t>(trial) + 1);
  return Rng(splitmix64(h));
}

Complex sample_disc(Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = std::sqrt(unit(rng));
  const double phi = 2.0 * std::numbers::pi * unit(rng);
  return std::polar(r, phi);
}

Vector sample_vector(int k, Rng& rng) {
  Vector v(k);
  for (int i = 0; i < k; ++i) v(i) = sample_disc(rng);
  return v;
}

Matrix sample_matrix(int k, Rng& rng) {
  Matrix m(k, k);
  for (int c = 0; c < k; ++c) {
    for (int r = 0; r < k; ++r) m(r, c) = sample_disc(rng);
  }
  return m;
}

Matrix sample_group(int k, Rng& rng) { return matrix_exp(sample_matrix(k, rng)); }

SlicePoint sample_slice(int k, Rng& rng) { return {sample_vector(k, rng)}; }

WPoint sample_wpoint(int k, Orientation orientation, Rng& rng) {
  WPoint p;
  p.g = sample_group(k, rng);
  p.x = sample_slice(k, rng);
  p.orientation = orientation;
  return p;
}

UClass sample_uclass(int k, int b, int bprime, Rng& rng) {
  UClass m;
  m.b = b;
  m.bprime = bprime;
  for (int i = 0; i < b + bprime; ++i) m.gs.push_back(sample_group(k, rng));
  m.x = sample_slice(k, rng);
  validate(m);
  return m;
}

AElement sample_a0(const Matrix& x, int n, Rng& rng) {
  const int k = static_cast<int>(x.rows());
  const double scale = 1.0 + x.norm();
  AElement a;
  a.factors.resize(n);
  for (int m = 1; m <= k; ++m) {
    Complex total = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      const Complex c = sample_disc(rng) / (m * std::pow(scale, m - 1));
      a.factors[i].push_back({m, c});
      total += c;
    }
    a.factors[n - 1].push_back({m, -total});
  }
  return a;
}

Matrix sample_centralizer(const Matrix& x, Rng& rng) {
  const int k = static_cast<int>(x.rows());
  Matrix poly = Matrix::Zero(k, k);
  Matrix power = identity(k);
  const double scale = 1.0 / (1.0 + x.norm());
  for (int j = 0; j < k; ++j) {
    poly += sample_disc(rng) * std::pow(scale, j) * power;
    power = power * x;
  }
  return matrix_exp(poly);
}

JetScheme sample_jetscheme(int k, int b, int bprime, Rng& rng) {
  JetScheme d;
  d.k = k;
  d.b = b;
  d.bprime = bprime;
  std::uniform_int_distribution<int> part(1, k);
  int left = k;
  std::vector<Complex> used;
  while (left > 0) {
    LocalPiece p;
    p.length = std::min(left, part(rng));
    left -= p.length;
    // base points in the disc of radius 1.5, pairwise at least 0.3 apart
    for (;;) {
      p.z = 1.5 * sample_disc(rng);
      bool ok = true;
      for (const auto& z : used) ok = ok && std::abs(z - p.z) >= 0.3;
      if (ok) break;
    }
    used.push_back(p.z);
    for (int j = 0; j < b + bprime; ++j) {
      std::vector<Vector> jet;
      for (int m = 0; m < p.length; ++m) jet.push_back(sample_vector(k, rng));
      p.jets.push_back(jet);
    }
    d.pieces.push_back(p);
  }
  return jet_normalize(d);
}

}  // namespace mtv
