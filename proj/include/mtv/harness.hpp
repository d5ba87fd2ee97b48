#pragma once

// Randomised verification suites and sample generators.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mtv/differential.hpp"
#include "mtv/json_io.hpp"

namespace mtv {

using Rng = std::mt19937_64;

struct SuiteConfig {
  int k = 3;
  int b = 1;
  int bprime = 1;
  int trials = 20;
  std::uint64_t seed = 42;
  double tol_alg = 1e-10;
  double tol_fd = 1e-4;
  double fd_step = 1e-4;
  std::vector<std::string> suites;
};

struct SuiteResult {
  std::string name;
  int trials = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  /// Smallest residual seen on corrupted inputs; must exceed control_threshold.
  double control_residual = 0.0;
  double control_threshold = 0.0;
  int failures = 0;
  int controls_missed = 0;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

struct Report {
  SuiteConfig config;
  std::vector<SuiteResult> suites;
  bool pass = false;
};

/// Names accepted by run_suite, in execution order.
const std::vector<std::string>& suite_names();

/// Throws UsageError on an invalid configuration or unknown suite name.
/// "all" expands to every suite.
void validate(const SuiteConfig& config);

Report run_suite(const SuiteConfig& config);
SuiteResult run_one_suite(const std::string& name, const SuiteConfig& config);

Json to_json(const SuiteConfig& config);
Json to_json(const SuiteResult& result);
Json to_json(const Report& report);

/// Independent stream per (seed, suite, trial).
Rng trial_rng(std::uint64_t seed, const std::string& suite, int trial);

Complex sample_disc(Rng& rng);
Vector sample_vector(int k, Rng& rng);
Matrix sample_matrix(int k, Rng& rng);
/// exp of a matrix with entries in the unit disc.
Matrix sample_group(int k, Rng& rng);
SlicePoint sample_slice(int k, Rng& rng);
WPoint sample_wpoint(int k, Orientation orientation, Rng& rng);
UClass sample_uclass(int k, int b, int bprime, Rng& rng);
/// A random element of A_0 for n factors, scaled so that exp(C_P(X)) stays
/// well conditioned at X.
AElement sample_a0(const Matrix& x, int n, Rng& rng);
/// exp of a random polynomial in X: an element of the centraliser of X.
Matrix sample_centralizer(const Matrix& x, Rng& rng);
/// Random partition of k into pieces at base points at least 0.3 apart, with random jets.
JetScheme sample_jetscheme(int k, int b, int bprime, Rng& rng);

}  // namespace mtv
