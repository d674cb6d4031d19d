#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "fockdimer/config.hpp"
#include "fockdimer/errors.hpp"
#include "fockdimer/experiments.hpp"

namespace {

enum Exit { kPass = 0, kResidual = 1, kConfig = 2, kConvergence = 3 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimer models with Fock weights on Schottky-uniformized M-curves"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string suite;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides [output] directory)");
    sub->add_option("--tol", tol, "residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));
  };
  CLI::App* weights = app.add_subcommand("weights", "write the Fock weight table");
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  CLI::App* degenerate = app.add_subcommand("degenerate", "convergence table under s_i -> 0");
  CLI::App* series = app.add_subcommand("series", "first-order expansions in sqrt(s)");
  CLI::App* theta_eval = app.add_subcommand("theta-eval", "evaluate theta and its gradient");
  CLI::App* abel_eval = app.add_subcommand("abel-eval", "evaluate Abel map, prime form and differentials");
  for (CLI::App* sub : {weights, verify, degenerate, series, theta_eval, abel_eval}) common(sub);
  verify->add_option("--suite", suite, "kernel, kasteleyn, identity35, inverse, periods or theta")
      ->required()
      ->check(CLI::IsMember({"kernel", "kasteleyn", "identity35", "inverse", "periods", "theta"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    fockdimer::RunConfig cfg = fockdimer::load_config(config_path);
    if (tol) cfg.tolerance = *tol;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (out_dir) cfg.output_dir = *out_dir;

    fockdimer::RunOutput out;
    if (*weights) out = fockdimer::run_weights(cfg);
    else if (*verify) out = fockdimer::run_verify(cfg, suite);
    else if (*degenerate) out = fockdimer::run_degenerate(cfg);
    else if (*series) out = fockdimer::run_series(cfg);
    else if (*theta_eval) out = fockdimer::run_theta_eval(cfg);
    else out = fockdimer::run_abel_eval(cfg);

    fockdimer::write_outputs(out, cfg.output_dir);
    for (const auto& file : out.files) std::cout << cfg.output_dir << "/" << file.first << "\n";
    if (!out.pass) {
      std::cerr << "residual check failed; see the report\n";
      return kResidual;
    }
    return kPass;
  } catch (const fockdimer::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return kConvergence;
  } catch (const fockdimer::PoleError& e) {
    std::cerr << "pole error: " << e.what() << "\n";
    return kConfig;
  } catch (const fockdimer::DegenerateError& e) {
    std::cerr << "degenerate input: " << e.what() << "\n";
    return kConfig;
  } catch (const fockdimer::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
}
