#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mtv/errors.hpp"
#include "mtv/harness.hpp"
#include "mtv/json_io.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInvalid = 2;

mtv::Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mtv::UsageError("cannot open " + path);
  try {
    return mtv::Json::parse(in);
  } catch (const mtv::Json::exception& e) {
    throw mtv::ValidationError(path + ": " + e.what());
  }
}

std::vector<std::string> split_suites(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (!name.empty()) out.push_back(name);
    }
  }
  return out;
}

int run_verify(mtv::SuiteConfig config, const std::vector<std::string>& suites) {
  config.suites = split_suites(suites);
  const mtv::Report report = mtv::run_suite(config);
  std::cout << mtv::to_json(report).dump(2) << "\n";
  for (const auto& s : report.suites) {
    std::fprintf(stderr, "%-20s %s  trials=%-5d max_residual=%.3e tol=%.1e  %.2fs%s%s\n", s.name.c_str(),
                 s.pass ? "PASS" : "FAIL", s.trials, s.max_residual, s.tolerance, s.seconds,
                 s.detail.empty() ? "" : "  ", s.detail.c_str());
  }
  std::fprintf(stderr, "overall: %s\n", report.pass ? "PASS" : "FAIL");
  return report.pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for open Moore-Tachikawa varieties"};
  app.require_subcommand(1);

  mtv::SuiteConfig config;
  std::vector<std::string> suites{"all"};
  auto* verify = app.add_subcommand("verify", "run randomised verification suites");
  verify->add_option("--k", config.k, "matrix size")->capture_default_str();
  verify->add_option("--b", config.b, "incoming legs")->capture_default_str();
  verify->add_option("--bprime", config.bprime, "outgoing legs")->capture_default_str();
  verify->add_option("--trials", config.trials, "trials per suite")->capture_default_str();
  verify->add_option("--seed", config.seed, "random seed")->capture_default_str();
  verify->add_option("--tol-alg", config.tol_alg, "algebraic tolerance")->capture_default_str();
  verify->add_option("--tol-fd", config.tol_fd, "finite-difference tolerance")->capture_default_str();
  verify->add_option("--fd-step", config.fd_step, "finite-difference step")->capture_default_str();
  verify->add_option("--suite", suites, "suite names, comma separated, or 'all'")->capture_default_str();

  std::string in1, in2, out_path;
  int out_index = 0, in_index = 0, absorber = 0;
  auto* glue = app.add_subcommand("glue", "glue two classes along an outgoing and an incoming leg");
  glue->add_option("--in1", in1, "class with the outgoing leg")->required();
  glue->add_option("--out-index", out_index, "outgoing leg of the first class")->capture_default_str();
  glue->add_option("--in2", in2, "class with the incoming leg")->required();
  glue->add_option("--in-index", in_index, "incoming leg of the second class")->capture_default_str();
  glue->add_option("--absorber", absorber, "leg of the result that absorbs the centraliser element")
      ->capture_default_str();

  std::string direction, hilb_in;
  auto* hilb = app.add_subcommand("hilb", "convert between jet schemes and classes");
  hilb->add_option("direction", direction, "to-u or from-u")->required()->check(CLI::IsMember({"to-u", "from-u"}));
  hilb->add_option("--in", hilb_in, "input file")->required();

  std::string kind, orientation = "in";
  int sk = 3, sb = 1, sbp = 1;
  std::uint64_t sseed = 42;
  auto* sample = app.add_subcommand("sample", "print a random sample");
  sample->add_option("--kind", kind, "wpoint, uclass or jetscheme")
      ->required()
      ->check(CLI::IsMember({"wpoint", "uclass", "jetscheme"}));
  sample->add_option("--k", sk, "matrix size")->capture_default_str();
  sample->add_option("--b", sb, "incoming legs")->capture_default_str();
  sample->add_option("--bprime", sbp, "outgoing legs")->capture_default_str();
  sample->add_option("--seed", sseed, "random seed")->capture_default_str();
  sample->add_option("--orientation", orientation, "in or out (wpoint)")
      ->capture_default_str()
      ->check(CLI::IsMember({"in", "out"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInvalid;
  }

  try {
    if (*verify) return run_verify(config, suites);
    if (*glue) {
      const mtv::UClass m1 = mtv::uclass_from_json(read_json(in1));
      const mtv::UClass m2 = mtv::uclass_from_json(read_json(in2));
      if (m1.b == 0 && m1.bprime == 1 && m2.b == 1 && m2.bprime == 0) {
        if (out_index != 0 || in_index != 0) throw mtv::DimensionError("glue: leg index out of range");
        const mtv::W00Point w = mtv::w00_from_glue(m2, m1);
        std::cout << mtv::Json{{"g", mtv::to_json(w.g)}, {"X", mtv::to_json(w.x)}}.dump(2) << "\n";
      } else {
        std::cout << mtv::to_json(mtv::glue(m1, out_index, m2, in_index, absorber)).dump(2) << "\n";
      }
      std::fprintf(stderr, "glued\n");
      return kPass;
    }
    if (*hilb) {
      const mtv::Json in = read_json(hilb_in);
      if (direction == "to-u") {
        std::cout << mtv::to_json(mtv::hilb_to_u(mtv::jet_scheme_from_json(in))).dump(2) << "\n";
      } else {
        std::cout << mtv::to_json(mtv::u_to_hilb(mtv::uclass_from_json(in))).dump(2) << "\n";
      }
      std::fprintf(stderr, "converted (%s)\n", direction.c_str());
      return kPass;
    }
    if (*sample) {
      if (sk < 1 || sb < 0 || sbp < 0 || sb + sbp < 1) throw mtv::UsageError("sample: bad size or signature");
      mtv::Rng rng = mtv::trial_rng(sseed, "sample", 0);
      mtv::Json out;
      if (kind == "wpoint") {
        out = mtv::to_json(mtv::sample_wpoint(sk, orientation == "in" ? mtv::Orientation::incoming
                                                                      : mtv::Orientation::outgoing, rng));
      } else if (kind == "uclass") {
        out = mtv::to_json(mtv::sample_uclass(sk, sb, sbp, rng));
      } else {
        out = mtv::to_json(mtv::sample_jetscheme(sk, sb, sbp, rng));
      }
      std::cout << out.dump(2) << "\n";
      std::fprintf(stderr, "sampled %s\n", kind.c_str());
      return kPass;
    }
  } catch (const mtv::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  }
  return kInvalid;
}
