#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "energynet/harness/commands.hpp"

namespace eh = energynet::harness;

int main(int argc, char** argv) {
  CLI::App app{"Layered energy-based rate networks: relaxation, sampling, nudging and STDP training"};
  app.require_subcommand(1);
  app.fallthrough();

  eh::FlagOverrides flags;
  std::string config_path, layers, out_dir, filter, dataset, mode;
  std::uint64_t seed = 0;
  double epsilon = 0.0, sigma = 0.0;
  int jobs = 0, epochs = 0;
  auto* o_config = app.add_option("--config", config_path, "JSON config file");
  auto* o_seed = app.add_option("--seed", seed, "Random seed");
  auto* o_eps = app.add_option("--epsilon", epsilon, "Integration step / nudge strength");
  auto* o_sigma = app.add_option("--sigma", sigma, "Noise standard deviation");
  auto* o_layers = app.add_option("--layers", layers, "Layer sizes, output to input, e.g. 2,4,4,3");
  auto* o_out = app.add_option("--out", out_dir, "Output directory");
  auto* o_jobs = app.add_option("--jobs", jobs, "Parallel workers for verify");
  auto* o_filter = app.add_option("--filter", filter, "Invariant group or name substring for verify");
  auto* o_epochs = app.add_option("--epochs", epochs, "Training epochs");
  auto* o_dataset = app.add_option("--dataset", dataset, "xor | random_teacher | identity");
  auto* o_mode = app.add_option("--mode", mode, "one_shot | free_run");

  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  bool inject_asymmetry = false;
  verify->add_flag("--inject-asymmetry", inject_asymmetry, "Test hook: perturb W asymmetrically");
  auto* relax = app.add_subcommand("relax", "Relax to a fixed point with the input clamped");
  auto* sample = app.add_subcommand("sample", "Run a logged noisy trajectory");
  auto* nudge = app.add_subcommand("nudge", "Compare output nudging with backprop gradients");
  auto* trainc = app.add_subcommand("train", "Train with the STDP rule");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return eh::kExitBadConfig;
  }

  auto set = [](CLI::Option* opt, auto& slot, const auto& value) {
    if (opt->count() > 0) slot = value;
  };
  set(o_config, flags.config_path, config_path);
  set(o_seed, flags.seed, seed);
  set(o_eps, flags.epsilon, epsilon);
  set(o_sigma, flags.sigma, sigma);
  set(o_layers, flags.layers, layers);
  set(o_out, flags.out_dir, out_dir);
  set(o_jobs, flags.jobs, jobs);
  set(o_filter, flags.filter, filter);
  set(o_epochs, flags.epochs, epochs);
  set(o_dataset, flags.dataset, dataset);
  set(o_mode, flags.mode, mode);

  eh::RunConfig cfg;
  try {
    cfg = eh::resolve_config(flags);
    eh::echo_config(cfg);
  } catch (const energynet::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return eh::kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return eh::kExitBadConfig;
  }

  try {
    if (verify->parsed()) {
      eh::VerifyOptions opts;
      opts.inject_asymmetry = inject_asymmetry;
      return eh::cmd_verify(cfg, opts, std::cout);
    }
    if (relax->parsed()) return eh::cmd_relax(cfg, std::cout);
    if (sample->parsed()) return eh::cmd_sample(cfg, std::cout);
    if (nudge->parsed()) return eh::cmd_nudge(cfg, std::cout);
    if (trainc->parsed()) return eh::cmd_train(cfg, std::cout);
  } catch (const energynet::NonConvergence& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return eh::kExitNonConvergence;
  } catch (const energynet::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return eh::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return eh::kExitInvariant;
  }
  return eh::kExitBadConfig;
}
