#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "energynet/harness/instances.hpp"
#include "energynet/learning.hpp"

namespace energynet::harness {

struct CheckResult {
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  // Test hook: evaluate the Jacobian-symmetry invariant against a weight
  // matrix with an asymmetric perturbation, which must make it fail.
  bool inject_asymmetry = false;
  std::uint64_t seed = 20151104;
};

struct Invariant {
  std::string group;
  std::string name;
  std::function<CheckResult(const VerifyOptions&)> run;
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << v;
  return ss.str();
}

inline CheckResult bound(double worst, double limit, const std::string& what) {
  return {worst <= limit, what + " " + fmt(worst) + " (limit " + fmt(limit) + ")"};
}

inline StateVector<double> all_free(const Vector<double>& v) {
  return StateVector<double>(v, std::vector<ClampMode<double>>(static_cast<std::size_t>(v.size())));
}

inline Vector<double> away_from_kinks(Rng& rng, const HardSigmoid<double>& nl, std::size_t n, double margin) {
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  Vector<double> v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    do v[i] = unif(rng);
    while (nl.kink_distance(v[i]) < margin);
  }
  return v;
}

// ---- model ------------------------------------------------------------------

inline CheckResult rho_properties(const VerifyOptions& o) {
  Rng rng(o.seed);
  std::uniform_real_distribution<double> beta(-0.99, -0.01), s(-3.0, 3.0);
  bool ok = true;
  double worst_lip = 0.0;
  for (int c = 0; c < 2000; ++c) {
    const HardSigmoid<double> nl(beta(rng));
    ok = ok && nl.rate(nl.beta1()) == 0.0 && nl.rate(nl.beta2()) == 1.0;
    const double a = s(rng), b = s(rng);
    const double ra = nl.rate(a), rb = nl.rate(b);
    ok = ok && ra >= 0.0 && ra <= 1.0;
    if (a != b) worst_lip = std::max(worst_lip, std::abs(ra - rb) / std::abs(a - b));
  }
  return {ok && worst_lip <= 1.0 + 1e-12, "bounds/endpoints " + std::string(ok ? "ok" : "violated") +
                                              ", max slope " + fmt(worst_lip)};
}

inline CheckResult drive_identity(const VerifyOptions& o) {
  Rng rng(o.seed + 1);
  double worst = 0.0;
  for (int c = 0; c < 300; ++c) {
    const auto p = random_params<double>(random_topology(rng), rng);
    const Vector<double> s = random_vector(rng, p.num_units(), -1.5, 1.5);
    worst = std::max(worst, (drive(p, s) - (s - energy_gradient(p, s))).cwiseAbs().maxCoeff());
  }
  return bound(worst, 1e-12, "max |R - (s - dE/ds)|");
}

inline CheckResult energy_gradient_fd(const VerifyOptions& o) {
  Rng rng(o.seed + 2);
  const double h = 1e-5;
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    const auto p = random_params<double>(random_topology(rng), rng);
    Vector<double> s = away_from_kinks(rng, p.nonlinearity(), p.num_units(), 1e-3);
    const Vector<double> g = energy_gradient(p, s);
    Vector<double> fd(g.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const double orig = s[i];
      s[i] = orig + h;
      const double up = energy(p, s);
      s[i] = orig - h;
      const double down = energy(p, s);
      s[i] = orig;
      fd[i] = (up - down) / (2 * h);
    }
    worst = std::max(worst, (fd - g).norm() / std::max(g.norm(), 1e-300));
  }
  return bound(worst, 1e-6, "relative L2 error");
}

inline CheckResult jacobian_symmetry(const VerifyOptions& o) {
  Rng rng(o.seed + 3);
  double worst = 0.0;
  for (int c = 0; c < 300; ++c) {
    const auto p = random_params<double>(random_topology(rng), rng);
    const Vector<double> s = away_from_kinks(rng, p.nonlinearity(), p.num_units(), 1e-3);
    Matrix<double> j = drive_jacobian(p, s).matrix;
    if (o.inject_asymmetry) {
      const Vector<double> d = slopes(p.nonlinearity(), s);
      Matrix<double> w = p.global_weights();
      w(0, static_cast<Eigen::Index>(p.topology().offset(1))) += 0.25;
      j = d.asDiagonal() * w * d.asDiagonal();
    }
    worst = std::max(worst, (j - j.transpose()).cwiseAbs().maxCoeff());
  }
  return bound(worst, 1e-12, "max |J - J^T|");
}

inline CheckResult energy_permutation(const VerifyOptions& o) {
  Rng rng(o.seed + 4);
  double worst = 0.0;
  for (int c = 0; c < 200; ++c) {
    const auto p = random_params<double>(random_topology(rng), rng);
    const auto& topo = p.topology();
    Vector<double> b = random_vector(rng, p.num_units(), -0.3, 0.3);
    const NetworkParams<double> base(topo, p.blocks(), b, p.nonlinearity());
    const Vector<double> s = random_vector(rng, p.num_units(), -1.5, 1.5);
    // Relabel units within each layer; blocks, biases and state follow.
    std::vector<Eigen::PermutationMatrix<Eigen::Dynamic>> perms;
    Eigen::VectorXi flat(static_cast<Eigen::Index>(p.num_units()));
    for (std::size_t k = 0; k < topo.num_layers(); ++k) {
      std::vector<int> idx(topo.size(k));
      for (std::size_t u = 0; u < idx.size(); ++u) idx[u] = static_cast<int>(u);
      std::shuffle(idx.begin(), idx.end(), rng);
      Eigen::VectorXi ind(static_cast<Eigen::Index>(idx.size()));
      for (std::size_t u = 0; u < idx.size(); ++u) {
        ind[static_cast<Eigen::Index>(u)] = idx[u];
        flat[static_cast<Eigen::Index>(topo.offset(k) + u)] = static_cast<int>(topo.offset(k)) + idx[u];
      }
      perms.emplace_back(ind);
    }
    std::vector<Matrix<double>> blocks;
    for (std::size_t k = 0; k < topo.num_blocks(); ++k) {
      blocks.push_back(perms[k] * p.block(k) * perms[k + 1].transpose());
    }
    const Eigen::PermutationMatrix<Eigen::Dynamic> pf(flat);
    const NetworkParams<double> permuted(topo, blocks, pf * b, p.nonlinearity());
    const double e0 = energy(base, s);
    const double e1 = energy(permuted, Vector<double>(pf * s));
    worst = std::max(worst, std::abs(e0 - e1) / std::max(1.0, std::abs(e0)));
  }
  return bound(worst, 1e-12, "relative energy change");
}

// ---- dynamics -----------------------------------------------------------------

inline CheckResult energy_descent(const VerifyOptions& o) {
  Rng rng(o.seed + 5);
  double worst_smooth = 0.0, worst_kink = 0.0;
  long kink_steps = 0;
  for (int c = 0; c < 40; ++c) {
    const auto p = random_params<double>(random_topology(rng, {1, 3, 2, 6}), rng, 1.0);
    DynamicsConfig dyn;
    dyn.epsilon = c % 2 ? 0.1 : 0.05;
    const auto log = langevin_chain(p, all_free(random_vector(rng, p.num_units(), -1.5, 1.5)), dyn, 1000);
    for (std::size_t t = 0; t + 1 < log.steps.size(); ++t) {
      const double rise = log.steps[t + 1].energy - log.steps[t].energy;
      if (energynet::detail::crosses_kink(p.nonlinearity(), log.steps[t].state, log.steps[t + 1].state)) {
        ++kink_steps;
        worst_kink = std::max(worst_kink, rise);
      } else {
        worst_smooth = std::max(worst_smooth, rise);
      }
    }
  }
  auto r = bound(worst_smooth, 1e-12, "max rise on kink-free steps");
  r.detail += "; kink-crossing steps " + std::to_string(kink_steps) + " (max rise " + fmt(worst_kink) + ", not bounded)";
  return r;
}

inline CheckResult saturation_decay(const VerifyOptions& o) {
  Rng rng(o.seed + 6);
  double worst = 0.0;
  long checked = 0;
  for (int c = 0; c < 100; ++c) {
    const auto p = random_params<double>(random_topology(rng), rng);
    Vector<double> s = random_vector(rng, p.num_units(), -0.4, 0.4);
    const auto unit = static_cast<Eigen::Index>(std::uniform_int_distribution<std::size_t>(0, p.num_units() - 1)(rng));
    s[unit] = (c % 2 ? 1.0 : -1.0) * std::uniform_real_distribution<double>(2.0, 6.0)(rng);
    DynamicsConfig dyn;
    dyn.epsilon = 0.05;
    const double s0 = std::abs(s[unit]);
    StateVector<double> state = all_free(s);
    Rng noise(1);
    for (int t = 1; t <= 400; ++t) {
      state = step(p, state, dyn, noise);
      if (!p.nonlinearity().saturated(state.values[unit])) break;
      const double expect = std::pow(1.0 - dyn.epsilon, t) * s0;
      worst = std::max(worst, std::abs(std::abs(state.values[unit]) - expect) / expect);
      ++checked;
    }
  }
  auto r = bound(worst, 1e-10, "relative deviation from (1-eps)^t");
  r.detail += " over " + std::to_string(checked) + " steps";
  return r;
}

// Free units start anywhere in [-3, 3], many of them saturated; whatever
// fixed point they reach must put every free unit back on the linear piece.
inline CheckResult no_saturated_fixed_points(const VerifyOptions& o) {
  Rng rng(o.seed + 7);
  int converged = 0, attempts = 0, violations = 0;
  while (converged < 100 && attempts < 5000) {
    ++attempts;
    const auto topo = random_topology(rng, {1, 2, 2, 5});
    const auto p = random_params<double>(topo, rng, 0.3);
    const NetworkParams<double> biased(topo, p.blocks(), random_vector(rng, topo.num_units(), -0.3, 0.3),
                                       p.nonlinearity());
    const std::size_t n_in = topo.size(topo.input_layer());
    StateVector<double> init = clamped_input_state(biased, random_vector(rng, n_in, -0.4, 0.4));
    init.values.head(static_cast<Eigen::Index>(topo.num_units() - n_in)) =
        random_vector(rng, topo.num_units() - n_in, -3.0, 3.0);
    DynamicsConfig dyn;
    dyn.max_steps = 5000;
    const auto res = relax_unchecked(biased, init, dyn);
    if (!res.converged) continue;
    ++converged;
    for (std::size_t i = 0; i < res.state.size(); ++i) {
      if (res.state.is_free(i) && biased.nonlinearity().saturated(res.state.values[static_cast<Eigen::Index>(i)])) {
        ++violations;
      }
    }
  }
  return {violations == 0 && converged >= 100, std::to_string(violations) + " saturated free units across " +
                                                   std::to_string(converged) + " converged relaxations"};
}

inline CheckResult hard_clamp_invariance(const VerifyOptions& o) {
  Rng rng(o.seed + 8);
  bool ok = true;
  for (int c = 0; c < 50; ++c) {
    const auto p = random_params<double>(random_topology(rng), rng);
    StateVector<double> s = all_free(random_vector(rng, p.num_units(), -1.0, 1.0));
    for (std::size_t i = 0; i < s.size(); i += 2) s.clamp[i] = ClampMode<double>::hard();
    const StateVector<double> start = s;
    DynamicsConfig dyn;
    dyn.sigma = 0.05;
    Rng noise(c);
    for (int t = 0; t < 200; ++t) s = step(p, s, dyn, noise);
    for (std::size_t i = 0; i < s.size(); i += 2) {
      ok = ok && s.values[static_cast<Eigen::Index>(i)] == start.values[static_cast<Eigen::Index>(i)];
    }
  }
  return {ok, ok ? "clamped units bit-identical after 200 noisy steps" : "a clamped unit moved"};
}

inline CheckResult determinism(const VerifyOptions& o) {
  Rng rng(o.seed + 9);
  bool ok = true;
  for (int c = 0; c < 10; ++c) {
    const auto p = random_params<double>(random_topology(rng), rng);
    const auto s = all_free(random_vector(rng, p.num_units(), -1.0, 1.0));
    DynamicsConfig dyn;
    dyn.sigma = 0.1;
    dyn.seed = static_cast<std::uint64_t>(c) + 100;
    const auto a = langevin_chain(p, s, dyn, 200);
    const auto b = langevin_chain(p, s, dyn, 200);
    for (std::size_t t = 0; t < a.steps.size(); ++t) {
      ok = ok && a.steps[t].state == b.steps[t].state && a.steps[t].noise == b.steps[t].noise &&
           a.steps[t].energy == b.steps[t].energy;
    }
  }
  return {ok, ok ? "repeated seeded chains bit-identical" : "seeded chains diverged"};
}

// ---- langevin -------------------------------------------------------------------

inline CheckResult langevin_identity(const VerifyOptions& o) {
  Rng rng(o.seed + 10);
  double worst_noisy = 0.0, worst_clean = 0.0;
  for (int c = 0; c < 20; ++c) {
    const auto p = random_params<double>(random_topology(rng), rng);
    StateVector<double> s = clamped_input_state(p, random_vector(rng, p.topology().size(p.topology().input_layer()), -0.4, 0.4));
    DynamicsConfig dyn;
    dyn.sigma = c % 2 ? 0.1 : 0.01;
    dyn.seed = static_cast<std::uint64_t>(c);
    worst_noisy = std::max(worst_noisy, verify_langevin_identity(p, langevin_chain(p, s, dyn, 500), dyn));
    dyn.sigma = 0.0;
    worst_clean = std::max(worst_clean, verify_langevin_identity(p, langevin_chain(p, s, dyn, 200), dyn));
  }
  return {worst_noisy <= 1e-10 && worst_clean <= 1e-12,
          "noisy " + fmt(worst_noisy) + " (limit 1e-10), noise-free " + fmt(worst_clean) + " (limit 1e-12)"};
}

inline CheckResult langevin_negative_control(const VerifyOptions& o) {
  Rng rng(o.seed + 11);
  const auto p = random_params<double>(random_topology(rng), rng);
  DynamicsConfig dyn;
  dyn.sigma = 0.05;
  auto log = langevin_chain(p, all_free(random_vector(rng, p.num_units(), -0.4, 0.4)), dyn, 100);
  const double clean = verify_langevin_identity(p, log, dyn);
  log.steps[50].noise[0] += 1e-3;  // one tampered noise entry
  const double tampered = verify_langevin_identity(p, log, dyn);
  return {tampered > 1e-9 && clean <= 1e-10, "untouched " + fmt(clean) + ", tampered " + fmt(tampered)};
}

// ---- backprop -------------------------------------------------------------------

inline CheckResult one_shot_equivalence(const VerifyOptions& o) {
  Rng rng(o.seed + 12);
  const auto sampled = sample_settled_cases(rng, 20);
  NudgeExperimentConfig cfg;
  cfg.epsilon = 0.01;
  double worst = 0.0;
  int used = 0;
  for (const auto& c : sampled.cases) {
    const auto pl = c.params.cast<long double>();
    auto fixed = c.fixed.cast<long double>();
    fixed = polish_fixed_point(pl, fixed);
    const auto r = compare_with_oracle<long double>(pl, fixed, c.y.cast<long double>(), cfg);
    if (!r.linear_regime) continue;
    ++used;
    for (const auto& l : r.layers) worst = std::max(worst, l.relative_l2_error);
  }
  auto r = bound(worst, 1e-9, "max relative L2 error");
  r.passed = r.passed && used > 0;
  r.detail += " over " + std::to_string(used) + " nets";
  return r;
}

inline CheckResult jacobian_transpose(const VerifyOptions& o) {
  Rng rng(o.seed + 13);
  const auto sampled = sample_settled_cases(rng, 50);
  double worst = 0.0;
  for (const auto& c : sampled.cases) {
    const auto& topo = c.params.topology();
    const auto j = drive_jacobian(c.params, c.fixed.values).matrix;
    const auto ny = static_cast<Eigen::Index>(topo.size(0));
    const auto nh = static_cast<Eigen::Index>(topo.size(1));
    const auto off = static_cast<Eigen::Index>(topo.offset(1));
    const Matrix<double> dh_dy = j.block(off, 0, nh, ny);
    const Matrix<double> dy_dh = j.block(0, off, ny, nh);
    worst = std::max(worst, (dh_dy - dy_dh.transpose()).cwiseAbs().maxCoeff());
  }
  return bound(worst, 1e-12, "max |dR_h1/dy - (dR_y/dh1)^T|");
}

inline CheckResult oracle_agreement(const VerifyOptions& o) {
  Rng rng(o.seed + 14);
  const auto sampled = sample_settled_cases(rng, 20);
  double worst = 0.0;
  for (const auto& c : sampled.cases) {
    const auto bp = backprop_oracle(c.params, c.fixed, c.y);
    const auto fd = finite_difference_oracle(c.params, c.fixed, c.y, 1e-5);
    worst = std::max(worst, relative_l2(fd, bp.layers[1]));
  }
  return bound(worst, 1e-6, "backprop vs finite differences, relative L2");
}

inline CheckResult free_run_cosine(const VerifyOptions& o) {
  Rng rng(o.seed + 15);
  const auto sampled = sample_settled_cases(rng, 20);
  double worst = 1.0;
  for (const auto& c : sampled.cases) {
    for (double eps : {0.01, 0.005}) {
      NudgeExperimentConfig cfg{eps, NudgeMode::kFreeRun, 3, 1e-3};
      const auto r = compare_with_oracle(c.params, c.fixed, c.y, cfg);
      if (!r.linear_regime) continue;
      for (const auto& l : r.layers) worst = std::min(worst, l.cosine_similarity);
    }
  }
  return {worst >= 0.999, "min cosine " + fmt(worst) + " (limit 0.999)"};
}

inline CheckResult nudge_identities(const VerifyOptions& o) {
  Rng rng(o.seed + 16);
  const auto sampled = sample_settled_cases(rng, 20);
  double worst_dy = 0.0, worst_c = 0.0;
  for (const auto& c : sampled.cases) {
    const double eps = 0.01;
    const Vector<double> dy = nudge_once(c.params, c.fixed, c.y, eps);
    const Vector<double> grad = c.fixed.layer(c.params.topology(), 0) - c.y;
    worst_dy = std::max(worst_dy, (dy + eps * grad).cwiseAbs().maxCoeff());
    worst_c = std::max(worst_c, std::abs(cost(c.params, c.fixed, c.y) - dy.squaredNorm() / (2 * eps * eps)));
  }
  return {worst_dy == 0.0 && worst_c <= 1e-9,
          "dy + eps dC/dy " + fmt(worst_dy) + " (exact), |C - |dy|^2/2eps^2| " + fmt(worst_c) + " (limit 1e-9)"};
}

// ---- learning -------------------------------------------------------------------

inline CheckResult stdp_bilinearity(const VerifyOptions& o) {
  Rng rng(o.seed + 17);
  double worst = 0.0;
  LearningConfig cfg;
  cfg.symmetrize_updates = false;
  for (int c = 0; c < 50; ++c) {
    const auto p = random_params<double>(random_topology(rng), rng);
    const auto before = all_free(random_vector(rng, p.num_units(), -0.4, 0.4));
    const Vector<double> sdot = random_vector(rng, p.num_units(), -0.1, 0.1);
    const double a = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    const auto d1 = stdp_update(p, before, all_free(before.values + sdot), cfg);
    const auto da = stdp_update(p, before, all_free(before.values + a * sdot), cfg);
    for (std::size_t k = 0; k < d1.forward.size(); ++k) {
      worst = std::max(worst, (da.forward[k] - a * d1.forward[k]).cwiseAbs().maxCoeff());
      worst = std::max(worst, (da.backward[k] - a * d1.backward[k]).cwiseAbs().maxCoeff());
    }
  }
  return bound(worst, 1e-12, "max |D(a sdot) - a D(sdot)|");
}

inline CheckResult symmetry_preserved(const VerifyOptions& o) {
  const LayeredTopology topo({2, 4, 3});
  LearningConfig cfg;
  cfg.epsilon = 0.05;
  cfg.epochs = 3;
  cfg.sigma = 0.01;
  const auto data = generate_dataset(DatasetKind::kRandomTeacher, topo, 16, o.seed, o.seed + 1, cfg.dynamics());
  Rng rng(o.seed + 18);
  const auto res = train(random_params<double>(topo, rng), data, cfg);
  double worst = 0.0;
  for (const auto& m : res.history) worst = std::max(worst, m.weight_asymmetry);
  const Matrix<double> w = res.params.global_weights();
  worst = std::max(worst, (w - w.transpose()).cwiseAbs().maxCoeff());
  return bound(worst, 1e-12, "max weight asymmetry");
}

inline CheckResult fixed_point_zero_update(const VerifyOptions& o) {
  Rng rng(o.seed + 19);
  const auto sampled = sample_settled_cases(rng, 20);
  double worst = 0.0;
  LearningConfig cfg;
  for (const auto& c : sampled.cases) {
    DynamicsConfig dyn;
    Rng noise(0);
    StateVector<double> cur = c.fixed;
    WeightDeltas acc = WeightDeltas::zeros(c.params.topology());
    for (int t = 0; t < 50; ++t) {
      auto next = step(c.params, cur, dyn, noise);
      acc += stdp_update(c.params, cur, next, cfg);
      cur = std::move(next);
    }
    worst = std::max(worst, acc.max_abs());
  }
  return bound(worst, 1e-10, "max accumulated |dW| over 50 undriven steps");
}

inline CheckResult stdp_direction(const VerifyOptions& o) {
  Rng rng(o.seed + 20);
  CaseSampler s;
  s.topology = {1, 3, 2, 6};
  const auto sampled = sample_settled_cases(rng, 20, s);
  double worst = 1.0;
  LearningConfig cfg;
  cfg.epsilon = 0.005;
  cfg.nudge_steps = 1;
  for (const auto& c : sampled.cases) {
    Rng noise(0);
    const auto out = nudge_phase(c.params, c.fixed, c.y, cfg, noise);
    const Matrix<double>& a = out.stdp.forward[0];
    const Matrix<double>& b = out.sgd.forward[0];
    const Vector<double> fa = Eigen::Map<const Vector<double>>(a.data(), a.size());
    const Vector<double> fb = Eigen::Map<const Vector<double>>(b.data(), b.size());
    worst = std::min(worst, cosine(fa, fb));
  }
  return {worst >= 0.99, "min output-block cosine " + fmt(worst) + " at eps 0.005 (limit 0.99)"};
}

}  // namespace detail

inline std::vector<Invariant> all_invariants() {
  using namespace detail;
  return {
      {"model", "rho_bounds_lipschitz", rho_properties},
      {"model", "drive_identity", drive_identity},
      {"model", "energy_gradient_fd", energy_gradient_fd},
      {"model", "drive_jacobian_symmetry", jacobian_symmetry},
      {"model", "energy_permutation_invariance", energy_permutation},
      {"dynamics", "energy_descent", energy_descent},
      {"dynamics", "saturation_decay", saturation_decay},
      {"dynamics", "no_saturated_fixed_points", no_saturated_fixed_points},
      {"dynamics", "hard_clamp_invariance", hard_clamp_invariance},
      {"dynamics", "determinism", determinism},
      {"langevin", "langevin_identity", langevin_identity},
      {"langevin", "langevin_negative_control", langevin_negative_control},
      {"backprop", "one_shot_equivalence", one_shot_equivalence},
      {"backprop", "jacobian_transpose", jacobian_transpose},
      {"backprop", "oracle_agreement", oracle_agreement},
      {"backprop", "free_run_cosine", free_run_cosine},
      {"backprop", "nudge_identities", nudge_identities},
      {"learning", "stdp_bilinearity", stdp_bilinearity},
      {"learning", "symmetry_preserved", symmetry_preserved},
      {"learning", "fixed_point_zero_update", fixed_point_zero_update},
      {"learning", "stdp_direction", stdp_direction},
  };
}

/// An empty filter selects everything; otherwise a group name or a
/// substring of an invariant name.
inline std::vector<Invariant> select_invariants(const std::string& filter) {
  std::vector<Invariant> out;
  for (auto& inv : all_invariants()) {
    if (filter.empty() || inv.group == filter || inv.name.find(filter) != std::string::npos) out.push_back(std::move(inv));
  }
  return out;
}

struct VerifyRow {
  std::string group;
  std::string name;
  CheckResult result;
};

inline std::vector<VerifyRow> run_invariants(const std::vector<Invariant>& invs, const VerifyOptions& opts, int jobs) {
  std::vector<VerifyRow> rows(invs.size());
  auto run_one = [&](std::size_t i) {
    CheckResult r;
    try {
      r = invs[i].run(opts);
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what()};
    }
    rows[i] = {invs[i].group, invs[i].name, std::move(r)};
  };
  if (jobs <= 1) {
    for (std::size_t i = 0; i < invs.size(); ++i) run_one(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> workers;
  for (int w = 0; w < jobs; ++w) {
    workers.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next++; i < invs.size(); i = next++) run_one(i);
    }));
  }
  for (auto& f : workers) f.get();
  return rows;
}

}  // namespace energynet::harness
