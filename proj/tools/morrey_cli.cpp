// Experiment runner: descent, analyses, and data files for one configuration.
//
//   morrey --config run.cfg --out results/
//   morrey --n 2 --ell 4 --k 8 --adaptive --stencil symmetric --out results/
//   morrey chain --x 3,0 --y -3,0.5 --radius 1

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "morrey/morrey.hpp"

namespace {

std::vector<double> parse_vector(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const auto& part : morrey::text::split(s, ',')) {
    double v = 0.0;
    if (!morrey::text::parse_double(part, v)) {
      throw morrey::ValidationError(std::string("bad coordinate in --") + what + ": '" + part + "'");
    }
    out.push_back(v);
  }
  return out;
}

int run_chain(const std::string& x, const std::string& y, double radius) {
  const auto chain = morrey::finite_chain(parse_vector(x, "x"), parse_vector(y, "y"), radius);
  morrey::write_chain(std::cout, chain);
  return morrey::verify_chain(chain).ok() ? morrey::kExitOk : morrey::kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremals of Morrey's inequality by discrete p-energy descent"};

  std::string config_path;
  std::optional<int> n, ell, k;
  std::optional<double> p, tau;
  std::optional<long long> iters;
  std::optional<std::string> out, resume, analysis, levels, stencil, seminorm;
  std::optional<std::uint64_t> seed;
  bool adaptive = false;
  bool print_config = false;

  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--n", n, "dimension (1 or 2)");
  app.add_option("--ell", ell, "half-width of the domain [-ell, ell]^n");
  app.add_option("--k", k, "nodes per unit length");
  app.add_option("--p", p, "energy exponent");
  app.add_option("--tau", tau, "step size (adaptive ladder anchor with --adaptive)");
  app.add_option("--iters", iters, "maximum number of iterations");
  app.add_flag("--adaptive", adaptive, "adaptive Armijo step size");
  app.add_option("--resume", resume, "field archive to resume from");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "seed for sampled seminorm scans");
  app.add_option("--analysis", analysis, "comma-separated analyses, 'all' or 'none'");
  app.add_option("--levels", levels, "comma-separated quasiconcavity levels");
  app.add_option("--stencil", stencil, "forward or symmetric");
  app.add_option("--seminorm", seminorm, "exact, sampled or automatic");
  app.add_flag("--print-config", print_config, "print the resolved configuration and exit");

  auto* chain = app.add_subcommand("chain", "build and verify a finite chain around a ball");
  std::string cx, cy;
  double radius = 1.0;
  chain->add_option("--x", cx, "first point, comma-separated coordinates")->required();
  chain->add_option("--y", cy, "second point, comma-separated coordinates")->required();
  chain->add_option("--radius", radius, "radius of the excluded ball")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return morrey::kExitValidation;
  }

  try {
    if (chain->parsed()) return run_chain(cx, cy, radius);

    morrey::ExperimentConfig config;
    if (!config_path.empty()) config = morrey::load_config(config_path);
    std::string overrides;
    auto put = [&](const char* key, const std::string& v) { overrides += std::string(key) + " = " + v + "\n"; };
    if (n) put("n", std::to_string(*n));
    if (ell) put("ell", std::to_string(*ell));
    if (k) put("k", std::to_string(*k));
    if (p) put("p", morrey::text::format_double(*p));
    if (tau) put("tau", morrey::text::format_double(*tau));
    if (iters) put("max_iters", std::to_string(*iters));
    if (adaptive) put("adaptive", "true");
    if (resume) put("resume", *resume);
    if (out) put("out", *out);
    if (seed) put("seed", std::to_string(*seed));
    if (analysis) put("analysis", *analysis);
    if (levels) put("levels", *levels);
    if (stencil) put("stencil", *stencil);
    if (seminorm) put("seminorm", *seminorm);
    config = morrey::parse_config(overrides, config);

    if (print_config) {
      morrey::validate(config);
      std::cout << morrey::serialize_config(config);
      return morrey::kExitOk;
    }

    const auto result = morrey::run_experiment(config, &std::cerr);
    if (result.status != morrey::kExitOk) {
      std::cerr << "error: " << result.message << '\n';
      return result.status;
    }
    std::cout << result.report;
    return morrey::kExitOk;
  } catch (const morrey::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return morrey::kExitValidation;
  } catch (const morrey::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return morrey::kExitIo;
  }
}
