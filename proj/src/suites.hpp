#pragma once

#include <algorithm>
#include <limits>
#include <string>

#include "mtv/harness.hpp"

namespace mtv::suites {

/// Accumulates residuals, boolean checks and negative controls over trials.
class Tally {
public:
  void residual(double r);
  void require(bool ok, const std::string& what);
  void control(double r);
  void control_detected(bool detected, const std::string& what);
  void error(const std::string& what);

  void finish(SuiteResult& out) const;

private:
  double worst_ = 0.0;
  double control_ = std::numeric_limits<double>::infinity();
  bool any_control_value_ = false;
  int failures_ = 0;
  int missed_ = 0;
  std::string detail_;
};

/// |a - b| / max(1, |a|, |b|).
double relative_gap(Complex a, Complex b);
double relative_gap(const Matrix& a, const Matrix& b);

/// Size for trial t, cycling through [lo, min(config.k, cap)].
int pick_k(const SuiteConfig& config, int trial, int cap, int lo = 1);

/// Signatures (b, b') with b <= config.b, b' <= config.bprime, 1 <= b + b' <= max_total.
std::vector<std::pair<int, int>> signatures(const SuiteConfig& config, int max_total);

void polarization(const SuiteConfig& config, SuiteResult& out);
void hamiltonian_w(const SuiteConfig& config, SuiteResult& out);
void closedness(const SuiteConfig& config, SuiteResult& out);
void form_identity(const SuiteConfig& config, SuiteResult& out);
void axiom_d(const SuiteConfig& config, SuiteResult& out);
void gluing(const SuiteConfig& config, SuiteResult& out);
void cotangent_identification(const SuiteConfig& config, SuiteResult& out);
void axiom_e(const SuiteConfig& config, SuiteResult& out);
void hilbert_round_trip(const SuiteConfig& config, SuiteResult& out);
void fitting_orbits(const SuiteConfig& config, SuiteResult& out);
void free_action(const SuiteConfig& config, SuiteResult& out);

}  // namespace mtv::suites
