#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "energynet/dynamics.hpp"

namespace energynet {

enum class NudgeMode { kOneShotProbe, kFreeRun };

struct NudgeExperimentConfig {
  double epsilon = 0.01;
  NudgeMode mode = NudgeMode::kOneShotProbe;
  int num_layers_to_check = 3;
  double kink_margin = 1e-3;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon <= 0.5)) throw Error(ErrorCode::kInvalidConfig, "nudge epsilon: must lie in (0, 0.5]");
    if (!(kink_margin >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "kink_margin: must be >= 0");
    if (num_layers_to_check < 0) throw Error(ErrorCode::kInvalidConfig, "num_layers_to_check: must be >= 0");
  }
};

// A change smaller than this counts as "not arrived yet" in free-run mode.
inline constexpr double kArrivalThreshold = 1e-14;

/// Clamped-input initial state: x hard clamped, everything else free and
/// started at `init` (zeros when absent).
template <typename Scalar>
StateVector<Scalar> clamped_input_state(const NetworkParams<Scalar>& params, const Vector<Scalar>& x,
                                        const std::optional<Vector<Scalar>>& init = std::nullopt) {
  const auto& topo = params.topology();
  const std::size_t in = topo.input_layer();
  if (static_cast<std::size_t>(x.size()) != topo.size(in)) {
    throw Error(ErrorCode::kDimensionMismatch, "x has " + std::to_string(x.size()) +
                                                   " entries, input layer has " + std::to_string(topo.size(in)));
  }
  StateVector<Scalar> s(topo.num_units());
  if (init) {
    detail::check_length(params, init->size());
    s.values = *init;
  }
  s.layer(topo, in) = x;
  s.set_layer_mode(topo, in, ClampMode<Scalar>::hard());
  return s;
}

/// Relaxes with x clamped, then polishes the fixed point so the drive
/// reproduces the state to rounding precision. Throws NonConvergence.
template <typename Scalar>
RelaxResult<Scalar> settle(const NetworkParams<Scalar>& params, const Vector<Scalar>& x,
                           const DynamicsConfig& config,
                           const std::optional<Vector<Scalar>>& init = std::nullopt) {
  auto out = relax(params, clamped_input_state(params, x, init), config);
  out.state = polish_fixed_point(params, std::move(out.state));
  return out;
}

template <typename Scalar>
Vector<Scalar> layer_of(const LayeredTopology& topo, const Vector<Scalar>& v, std::size_t k) {
  return v.segment(static_cast<Eigen::Index>(topo.offset(k)), static_cast<Eigen::Index>(topo.size(k)));
}

template <typename Scalar>
void check_target(const NetworkParams<Scalar>& params, const Vector<Scalar>& y) {
  if (static_cast<std::size_t>(y.size()) != params.topology().size(0)) {
    throw Error(ErrorCode::kDimensionMismatch, "target length does not match output layer");
  }
}

/// C = 1/2 |R_y(s^) - y|^2.
template <typename Scalar>
Scalar cost(const NetworkParams<Scalar>& params, const StateVector<Scalar>& fixed, const Vector<Scalar>& y) {
  check_target(params, y);
  const Vector<Scalar> ry = layer_of(params.topology(), drive(params, fixed), 0);
  return Scalar(0.5) * (ry - y).squaredNorm();
}

/// dy = eps (y - y^), the first-step move of weakly driven outputs.
template <typename Scalar>
Vector<Scalar> nudge_once(const NetworkParams<Scalar>& params, const StateVector<Scalar>& fixed,
                          const Vector<Scalar>& y, Scalar epsilon) {
  check_target(params, y);
  return epsilon * (y - fixed.layer(params.topology(), 0));
}

template <typename Scalar>
struct OracleGradients {
  std::vector<Vector<Scalar>> layers;      // dC/d(layer k), k = 0 (output) .. input-1
  std::vector<std::size_t> kink_contacts;  // flat indices within the margin
  bool linear_regime = true;
};

/// Explicit chain rule through the fixed-point relation: g_y = y^ - y, then
/// g_k = (dR_{k-1}/d s_k)^T g_{k-1}, one Jacobian block per layer.
template <typename Scalar>
OracleGradients<Scalar> backprop_oracle(const NetworkParams<Scalar>& params, const StateVector<Scalar>& fixed,
                                        const Vector<Scalar>& y, Scalar kink_margin = Scalar(1e-3)) {
  check_target(params, y);
  const auto& topo = params.topology();
  const auto jac = drive_jacobian(params, fixed.values, kink_margin);
  OracleGradients<Scalar> out;
  out.kink_contacts = jac.kink_contacts;
  out.linear_regime = jac.kink_contacts.empty();
  out.layers.push_back(fixed.layer(topo, 0) - y);
  for (std::size_t k = 1; k < topo.input_layer(); ++k) {
    const auto block = jac.matrix.block(static_cast<Eigen::Index>(topo.offset(k - 1)),
                                        static_cast<Eigen::Index>(topo.offset(k)),
                                        static_cast<Eigen::Index>(topo.size(k - 1)),
                                        static_cast<Eigen::Index>(topo.size(k)));
    out.layers.push_back(block.transpose() * out.layers.back());
  }
  return out;
}

/// Central differences of C with respect to the first hidden layer, holding
/// every other state coordinate fixed. Independent of the Jacobian path.
template <typename Scalar>
Vector<Scalar> finite_difference_oracle(const NetworkParams<Scalar>& params, const StateVector<Scalar>& fixed,
                                        const Vector<Scalar>& y, Scalar delta) {
  if (!(delta > Scalar(0))) throw Error(ErrorCode::kInvalidConfig, "finite-difference delta: must be > 0");
  const auto& topo = params.topology();
  const std::size_t off = topo.offset(1);
  Vector<Scalar> grad(static_cast<Eigen::Index>(topo.size(1)));
  StateVector<Scalar> probe = fixed;
  for (std::size_t u = 0; u < topo.size(1); ++u) {
    const auto i = static_cast<Eigen::Index>(off + u);
    const Scalar orig = fixed.values[i];
    probe.values[i] = orig + delta;
    const Scalar up = cost(params, probe, y);
    probe.values[i] = orig - delta;
    const Scalar down = cost(params, probe, y);
    probe.values[i] = orig;
    grad[static_cast<Eigen::Index>(u)] = (up - down) / (Scalar(2) * delta);
  }
  return grad;
}

template <typename Scalar>
struct LayerReport {
  std::size_t layer = 0;  // 0 = output, k = k-th hidden layer
  Vector<Scalar> measured_delta;
  Vector<Scalar> oracle_gradient;
  Vector<Scalar> predicted_delta;  // -eps^(k+1) * oracle_gradient
  double relative_l2_error = 0.0;
  double cosine_similarity = 0.0;
  int epsilon_power_used = 0;
  bool linear_regime = true;
  long arrival_step = 0;  // free-run only; 1-based step of first change
};

template <typename Scalar>
struct GradientReport {
  NudgeExperimentConfig config;
  std::vector<LayerReport<Scalar>> layers;
  double cost = 0.0;
  long settle_steps = 0;
  double settle_residual = 0.0;
  bool linear_regime = true;
  std::vector<std::size_t> kink_contacts;
};

/// |a - b| / |b|; falls back to |a - b| when b is the zero vector.
template <typename Scalar>
double relative_l2(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  const Scalar diff = (a - b).norm();
  const Scalar ref = b.norm();
  return static_cast<double>(ref > Scalar(0) ? diff / ref : diff);
}

/// Cosine of the angle between a and b; 1 when both vanish, 0 when only one does.
template <typename Scalar>
double cosine(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  const Scalar na = a.norm();
  const Scalar nb = b.norm();
  if (na == Scalar(0) && nb == Scalar(0)) return 1.0;
  if (na == Scalar(0) || nb == Scalar(0)) return 0.0;
  return std::clamp(static_cast<double>(a.dot(b) / (na * nb)), -1.0, 1.0);
}

namespace detail {

template <typename Scalar>
bool crosses_kink(const HardSigmoid<Scalar>& nl, const Vector<Scalar>& from, const Vector<Scalar>& to) {
  for (Eigen::Index i = 0; i < from.size(); ++i) {
    const bool a1 = from[i] < nl.beta1(), b1 = to[i] < nl.beta1();
    const bool a2 = from[i] > nl.beta2(), b2 = to[i] > nl.beta2();
    if (a1 != b1 || a2 != b2) return true;
  }
  return false;
}

// Per-layer deltas of the one-shot probe: each layer is perturbed alone from
// the fixed point by the previous layer's delta, and its one-step response is
// measured against the unperturbed step so the relaxation residual cancels.
template <typename Scalar>
std::vector<Vector<Scalar>> one_shot_deltas(const NetworkParams<Scalar>& params, const StateVector<Scalar>& fixed,
                                            const Vector<Scalar>& y, Scalar eps, std::size_t depth,
                                            bool& crossed) {
  const auto& topo = params.topology();
  const Vector<Scalar> base = drive(params, fixed);
  std::vector<Vector<Scalar>> deltas;
  deltas.push_back(nudge_once(params, fixed, y, eps));
  for (std::size_t k = 1; k <= depth; ++k) {
    Vector<Scalar> probe = fixed.values;
    auto seg = probe.segment(static_cast<Eigen::Index>(topo.offset(k - 1)),
                             static_cast<Eigen::Index>(topo.size(k - 1)));
    seg += deltas.back();
    crossed = crossed || crosses_kink(params.nonlinearity(), layer_of(topo, fixed.values, k - 1), Vector<Scalar>(seg));
    deltas.push_back(eps * (layer_of(topo, drive(params, probe), k) - layer_of(topo, base, k)));
  }
  return deltas;
}

// Free-running dynamics with y weakly driven, differenced against the same
// dynamics with y free. Returns the first per-step change above the arrival
// threshold for each layer, or zeros if it never arrives.
template <typename Scalar>
std::vector<Vector<Scalar>> free_run_deltas(const NetworkParams<Scalar>& params, const StateVector<Scalar>& fixed,
                                            const Vector<Scalar>& y, Scalar eps, std::size_t depth,
                                            std::vector<long>& arrival, bool& crossed) {
  const auto& topo = params.topology();
  StateVector<Scalar> driven = fixed;
  for (std::size_t u = 0; u < topo.size(0); ++u) driven.clamp[u] = ClampMode<Scalar>::driven(y[static_cast<Eigen::Index>(u)]);
  StateVector<Scalar> baseline = fixed;
  const Vector<Scalar> no_noise = Vector<Scalar>::Zero(fixed.values.size());

  std::vector<Vector<Scalar>> deltas(depth + 1);
  arrival.assign(depth + 1, 0);
  for (std::size_t k = 0; k <= depth; ++k) deltas[k] = Vector<Scalar>::Zero(static_cast<Eigen::Index>(topo.size(k)));

  Vector<Scalar> prev_gap = Vector<Scalar>::Zero(fixed.values.size());
  const long horizon = static_cast<long>(depth) + 2;
  for (long t = 1; t <= horizon; ++t) {
    Vector<Scalar> d_next = step_with_noise(params, driven, eps, no_noise);
    crossed = crossed || crosses_kink(params.nonlinearity(), driven.values, d_next);
    driven.values = std::move(d_next);
    baseline.values = step_with_noise(params, baseline, eps, no_noise);
    const Vector<Scalar> gap = driven.values - baseline.values;
    for (std::size_t k = 0; k <= depth; ++k) {
      if (arrival[k] != 0) continue;
      const Vector<Scalar> change = layer_of(topo, Vector<Scalar>(gap - prev_gap), k);
      if (static_cast<double>(change.cwiseAbs().maxCoeff()) > kArrivalThreshold) {
        deltas[k] = change;
        arrival[k] = t;
      }
    }
    prev_gap = gap;
  }
  return deltas;
}

}  // namespace detail

template <typename Scalar>
GradientReport<Scalar> compare_with_oracle(const NetworkParams<Scalar>& params, const StateVector<Scalar>& fixed,
                                           const Vector<Scalar>& y, const NudgeExperimentConfig& config) {
  config.validate();
  const auto& topo = params.topology();
  const auto eps = static_cast<Scalar>(config.epsilon);
  const std::size_t depth =
      std::min<std::size_t>(static_cast<std::size_t>(config.num_layers_to_check), topo.num_hidden());

  const auto oracle = backprop_oracle(params, fixed, y, static_cast<Scalar>(config.kink_margin));
  bool crossed = false;
  std::vector<long> arrival(depth + 1, 0);
  const auto measured = config.mode == NudgeMode::kOneShotProbe
                            ? detail::one_shot_deltas(params, fixed, y, eps, depth, crossed)
                            : detail::free_run_deltas(params, fixed, y, eps, depth, arrival, crossed);

  GradientReport<Scalar> report;
  report.config = config;
  report.cost = static_cast<double>(cost(params, fixed, y));
  report.kink_contacts = oracle.kink_contacts;
  report.linear_regime = oracle.linear_regime && !crossed;
  Scalar power = eps;
  for (std::size_t k = 0; k <= depth; ++k) {
    LayerReport<Scalar> lr;
    lr.layer = k;
    lr.measured_delta = measured[k];
    lr.oracle_gradient = oracle.layers[k];
    lr.predicted_delta = -power * oracle.layers[k];
    lr.relative_l2_error = relative_l2(lr.measured_delta, lr.predicted_delta);
    lr.cosine_similarity = cosine(lr.measured_delta, lr.predicted_delta);
    lr.epsilon_power_used = static_cast<int>(k) + 1;
    lr.linear_regime = report.linear_regime;
    lr.arrival_step = arrival[k];
    report.layers.push_back(std::move(lr));
    power *= eps;
  }
  return report;
}

/// Settle with x clamped, nudge the outputs toward y and compare the induced
/// per-layer perturbations with the back-propagated gradients.
template <typename Scalar>
GradientReport<Scalar> run_nudge_experiment(const NetworkParams<Scalar>& params, const Vector<Scalar>& x,
                                            const Vector<Scalar>& y, const NudgeExperimentConfig& config,
                                            const DynamicsConfig& dynamics = {}) {
  config.validate();
  check_target(params, y);
  const auto settled = settle(params, x, dynamics);
  auto report = compare_with_oracle(params, settled.state, y, config);
  report.settle_steps = settled.steps;
  report.settle_residual = settled.residual;
  return report;
}

}  // namespace energynet
