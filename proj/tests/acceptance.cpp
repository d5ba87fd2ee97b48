// Runs every acceptance criterion with its pinned configuration and prints
// one PASS/FAIL line per criterion. Exit status is 0 iff all pass.

#include <cstdio>
#include <string>
#include <vector>

#include "mtv/errors.hpp"
#include "mtv/harness.hpp"

namespace {

struct Criterion {
  int number;
  std::string suite;
  int k;
  int b;
  int bprime;
  int trials;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "polarization", 5, 1, 1, 100},
      {2, "hamiltonian_w", 4, 1, 1, 100},
      {3, "closedness", 3, 2, 2, 50},
      {4, "form_identity", 4, 3, 1, 100},
      {5, "axiom_d", 5, 2, 2, 200},
      {6, "gluing", 4, 2, 2, 50},
      {7, "theorem_2_4_i", 4, 1, 1, 50},
      {8, "axiom_e", 4, 2, 1, 50},
      {9, "hilbert_round_trip", 4, 2, 1, 50},
      {10, "fitting_orbits", 3, 1, 0, 1},
      {11, "free_action", 4, 2, 2, 25},
  };
  return list;
}

}  // namespace

int main() {
  int failed = 0;
  for (const auto& c : criteria()) {
    mtv::SuiteConfig config;
    config.k = c.k;
    config.b = c.b;
    config.bprime = c.bprime;
    config.trials = c.trials;
    config.seed = 42;
    config.tol_alg = 1e-10;
    config.tol_fd = 1e-4;
    config.fd_step = 1e-4;
    config.suites = {c.suite};
    bool pass = false;
    try {
      const mtv::SuiteResult r = mtv::run_one_suite(c.suite, config);
      pass = r.pass;
      char control[96];
      if (r.control_threshold > 0.0) {
        std::snprintf(control, sizeof control, "control=%.3e threshold=%.1e", r.control_residual,
                      r.control_threshold);
      } else {
        std::snprintf(control, sizeof control, "controls_missed=%d", r.controls_missed);
      }
      std::printf("criterion %2d %-20s %s  trials=%d residual=%.3e tol=%.1e %s %.2fs%s%s\n", c.number,
                  c.suite.c_str(), pass ? "PASS" : "FAIL", r.trials, r.max_residual, r.tolerance, control,
                  r.seconds, r.detail.empty() ? "" : "  ", r.detail.c_str());
    } catch (const mtv::Error& e) {
      std::printf("criterion %2d %-20s FAIL  error: %s\n", c.number, c.suite.c_str(), e.what());
    }
    std::fflush(stdout);
    if (!pass) ++failed;
  }
  std::printf("%s: %d of %zu criteria passed\n", failed == 0 ? "PASS" : "FAIL",
              static_cast<int>(criteria().size()) - failed, criteria().size());
  return failed == 0 ? 0 : 1;
}
