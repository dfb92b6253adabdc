#pragma once

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "energynet/harness/config.hpp"
#include "energynet/harness/io.hpp"
#include "energynet/harness/verify.hpp"

namespace energynet::harness {

enum ExitCode : int { kExitOk = 0, kExitInvariant = 1, kExitBadConfig = 2, kExitNonConvergence = 3 };

inline int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kNonConvergence:
      return kExitNonConvergence;
    case ErrorCode::kMissingNoiseLog:
      return kExitInvariant;
    default:
      return kExitBadConfig;
  }
}

// Independent streams derived from the run seed. The student init uses the
// seed itself, so a random teacher built with the same seed is the student.
inline std::uint64_t init_seed(const RunConfig& c) { return c.seed; }
inline std::uint64_t input_seed(const RunConfig& c) { return c.seed + 1; }
inline std::uint64_t teacher_seed(const RunConfig& c) { return c.seed + 2; }
inline std::uint64_t data_seed(const RunConfig& c) { return c.seed + 3; }

inline NetworkParams<double> initial_params(const RunConfig& c) {
  if (!c.params_file.empty()) {
    auto p = params_from_json(read_json_file(c.params_file));
    if (p.topology().layer_sizes() != c.layers) {
      throw Error(ErrorCode::kInvalidConfig, "params_file: topology does not match layers");
    }
    return p;
  }
  if (c.init == "zeros") return NetworkParams<double>::zeros(c.topology(), c.nonlinearity());
  Rng rng(init_seed(c));
  return random_params<double>(c.topology(), rng, c.init_gain, c.nonlinearity());
}

inline Vector<double> input_vector(const RunConfig& c, Rng& rng) {
  if (!c.x.empty()) return from_std(c.x);
  return random_vector(rng, c.layers.back(), -kInputAmplitude, kInputAmplitude);
}

inline void echo_config(const RunConfig& c) { write_json(std::filesystem::path(c.out_dir) / "config.json", c); }

inline int cmd_verify(const RunConfig& c, const VerifyOptions& opts, std::ostream& out) {
  const auto invs = select_invariants(c.filter);
  if (invs.empty()) throw Error(ErrorCode::kInvalidConfig, "filter: no invariant matches '" + c.filter + "'");
  const auto rows = run_invariants(invs, opts, c.jobs);
  bool all = true;
  nlohmann::json report = nlohmann::json::array();
  for (const auto& r : rows) {
    all = all && r.result.passed;
    out << (r.result.passed ? "PASS  " : "FAIL  ") << r.group << '/' << r.name << "  " << r.result.detail << '\n';
    report.push_back({{"group", r.group}, {"name", r.name}, {"passed", r.result.passed}});
  }
  out << (all ? "all invariants hold" : "invariant failure") << " (" << rows.size() << " checked)\n";
  write_json(std::filesystem::path(c.out_dir) / "verify.json", report);
  return all ? kExitOk : kExitInvariant;
}

inline int cmd_relax(const RunConfig& c, std::ostream& out) {
  const auto params = initial_params(c);
  Rng rng(input_seed(c));
  const Vector<double> x = input_vector(c, rng);
  const auto res = relax_unchecked(params, clamped_input_state(params, x), c.dynamics());
  const std::filesystem::path dir(c.out_dir);
  write_json(dir / "fixed_point.json", {{"state", to_std(res.state.values)},
                                        {"x", to_std(x)},
                                        {"residual", res.residual},
                                        {"steps", res.steps},
                                        {"converged", res.converged},
                                        {"energy", energy(params, res.state)}});
  std::string csv = "layer,unit,state\n";
  const auto& topo = params.topology();
  for (std::size_t k = 0; k < topo.num_layers(); ++k) {
    for (std::size_t u = 0; u < topo.size(k); ++u) {
      csv += std::to_string(k) + ',' + std::to_string(u) + ',' +
             format_double(res.state.values[static_cast<Eigen::Index>(topo.index(k, u))]) + '\n';
    }
  }
  write_text(dir / "fixed_point.csv", csv);
  out << (res.converged ? "converged" : "did not converge") << " after " << res.steps << " steps, residual "
      << format_double(res.residual) << '\n';
  return res.converged ? kExitOk : kExitNonConvergence;
}

inline int cmd_sample(const RunConfig& c, std::ostream& out) {
  const auto params = initial_params(c);
  Rng rng(input_seed(c));
  const Vector<double> x = input_vector(c, rng);
  const auto dyn = c.dynamics();
  const auto log = langevin_chain(params, clamped_input_state(params, x), dyn, c.sample_steps);
  const double identity_error = verify_langevin_identity(params, log, dyn);
  const std::filesystem::path dir(c.out_dir);
  write_text(dir / "trajectory.csv", trajectory_csv(log));
  write_json(dir / "sample_summary.json", {{"steps", c.sample_steps},
                                           {"final_energy", log.steps.back().energy},
                                           {"langevin_identity_max_error", identity_error}});
  out << "sampled " << c.sample_steps << " steps, final energy " << format_double(log.steps.back().energy)
      << ", identity error " << format_double(identity_error) << '\n';
  return kExitOk;
}

inline int cmd_nudge(const RunConfig& c, std::ostream& out) {
  const auto params = initial_params(c);
  Rng rng(input_seed(c));
  const Vector<double> x = input_vector(c, rng);
  const auto dyn = c.dynamics();
  Vector<double> y;
  if (c.target_free_output) {
    y = layer_of(params.topology(), settle(params, x, dyn).state.values, 0);
  } else if (!c.y.empty()) {
    y = from_std(c.y);
  } else {
    y = random_vector(rng, c.layers.front(), -kInputAmplitude, kInputAmplitude);
  }
  const auto report = run_nudge_experiment(params, x, y, c.nudge(), dyn);
  const std::filesystem::path dir(c.out_dir);
  write_json(dir / "gradient_report.json", report_to_json(report, c));
  write_text(dir / "gradient_report.csv", report_csv(report));
  for (const auto& l : report.layers) {
    out << "layer " << l.layer << ": relative error " << format_double(l.relative_l2_error) << ", cosine "
        << format_double(l.cosine_similarity) << '\n';
  }
  if (!report.linear_regime) out << "warning: fixed point or probe touches a kink; equivalence is not exact\n";
  return kExitOk;
}

inline int cmd_train(const RunConfig& c, std::ostream& out) {
  const auto params = initial_params(c);
  const auto lcfg = c.learning();
  const auto data = generate_dataset(parse_dataset_kind(c.dataset), c.topology(), c.dataset_size, data_seed(c),
                                     teacher_seed(c), lcfg.dynamics());
  const auto res = train(params, data, lcfg);
  const std::filesystem::path dir(c.out_dir);
  write_text(dir / "train_metrics.csv", metrics_csv(res.history));
  write_json(dir / "params.json", params_to_json(res.params));
  const double final_mse = res.history.empty() ? res.initial_mse : res.history.back().mse;
  write_json(dir / "train_summary.json", {{"dataset", c.dataset},
                                          {"examples", data.examples.size()},
                                          {"initial_mse", res.initial_mse},
                                          {"final_mse", final_mse},
                                          {"epochs", c.epochs}});
  out << "mse " << format_double(res.initial_mse) << " -> " << format_double(final_mse) << " over " << c.epochs
      << " epochs\n";
  return kExitOk;
}

}  // namespace energynet::harness
