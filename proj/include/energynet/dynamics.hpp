#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "energynet/model.hpp"

namespace energynet {

struct DynamicsConfig {
  double epsilon = 0.05;
  double sigma = 0.0;
  double tolerance = 1e-10;
  long max_steps = 100000;
  std::uint64_t seed = 42;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::kInvalidConfig, "epsilon: must lie in (0, 1]");
    if (!(sigma >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "sigma: must be >= 0");
    if (!(tolerance > 0.0)) throw Error(ErrorCode::kInvalidConfig, "tolerance: must be > 0");
    if (max_steps < 1) throw Error(ErrorCode::kInvalidConfig, "max_steps: must be positive");
  }
};

using Rng = std::mt19937_64;

/// i.i.d. N(0, sigma^2) per unit. sigma == 0 draws nothing and returns zeros.
template <typename Scalar>
Vector<Scalar> draw_noise(std::size_t n, double sigma, Rng& rng) {
  Vector<Scalar> eta = Vector<Scalar>::Zero(static_cast<Eigen::Index>(n));
  if (sigma > 0.0) {
    std::normal_distribution<double> gauss(0.0, sigma);
    for (Eigen::Index i = 0; i < eta.size(); ++i) eta[i] = static_cast<Scalar>(gauss(rng));
  }
  return eta;
}

/// s~ = s + eta on every unit, clamped ones included.
template <typename Scalar>
StateVector<Scalar> corrupt(const StateVector<Scalar>& state, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "sigma: must be >= 0");
  StateVector<Scalar> out = state;
  out.values += draw_noise<Scalar>(state.size(), sigma, rng);
  return out;
}

namespace detail {

// s + eps (target - s) per clamp mode, with `r` the drive seen by free units.
template <typename Scalar>
Vector<Scalar> integrate(const StateVector<Scalar>& state, const Vector<Scalar>& r, Scalar epsilon) {
  Vector<Scalar> next = state.values;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const Scalar s = state.values[ii];
    switch (state.clamp[i].kind) {
      case ClampKind::kFree: next[ii] = s + epsilon * (r[ii] - s); break;
      case ClampKind::kWeaklyDriven: next[ii] = s + epsilon * (state.clamp[i].target - s); break;
      case ClampKind::kHardClamped: break;
    }
  }
  return next;
}

}  // namespace detail

/// One synchronous leaky-integrator update given an explicit noise draw.
template <typename Scalar>
Vector<Scalar> step_with_noise(const NetworkParams<Scalar>& params, const StateVector<Scalar>& state,
                               Scalar epsilon, const Vector<Scalar>& noise) {
  detail::check_length(params, state.values.size());
  return detail::integrate(state, drive(params, Vector<Scalar>(state.values + noise)), epsilon);
}

template <typename Scalar>
StateVector<Scalar> step(const NetworkParams<Scalar>& params, const StateVector<Scalar>& state,
                         const DynamicsConfig& config, Rng& rng) {
  const Vector<Scalar> eta = draw_noise<Scalar>(state.size(), config.sigma, rng);
  return {step_with_noise(params, state, static_cast<Scalar>(config.epsilon), eta), state.clamp};
}

template <typename Scalar>
struct RelaxResult {
  StateVector<Scalar> state;
  long steps = 0;
  double residual = 0.0;  // last infinity-norm state change
  bool converged = false;
};

/// Noise-free iteration until the infinity-norm change drops below the
/// tolerance or the step budget runs out; reports rather than throws.
template <typename Scalar>
RelaxResult<Scalar> relax_unchecked(const NetworkParams<Scalar>& params, const StateVector<Scalar>& init,
                                    const DynamicsConfig& config) {
  config.validate();
  detail::check_length(params, init.values.size());
  const auto eps = static_cast<Scalar>(config.epsilon);
  RelaxResult<Scalar> out{init, 0, 0.0, false};
  for (long t = 0; t < config.max_steps; ++t) {
    Vector<Scalar> next = detail::integrate(out.state, drive(params, out.state.values), eps);
    out.residual = static_cast<double>((next - out.state.values).cwiseAbs().maxCoeff());
    out.state.values = std::move(next);
    out.steps = t + 1;
    if (out.residual < config.tolerance) {
      out.converged = true;
      break;
    }
  }
  return out;
}

/// As relax_unchecked, but throws NonConvergence when max_steps is exhausted.
template <typename Scalar>
RelaxResult<Scalar> relax(const NetworkParams<Scalar>& params, const StateVector<Scalar>& init,
                          const DynamicsConfig& config) {
  auto out = relax_unchecked(params, init, config);
  if (!out.converged) throw NonConvergence(out.steps, out.residual);
  return out;
}

/// Newton refinement of a relaxed state. On the linear piece the drive is
/// affine, so solving (I - J_ff) d = (s - R(s))_f over the free units lands on
/// the fixed point up to rounding. A refinement is kept only if it leaves
/// every free unit on the same side of both kinks and shrinks the residual.
template <typename Scalar>
StateVector<Scalar> polish_fixed_point(const NetworkParams<Scalar>& params, StateVector<Scalar> state,
                                       int rounds = 2) {
  std::vector<Eigen::Index> free;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state.is_free(i)) free.push_back(static_cast<Eigen::Index>(i));
  }
  if (free.empty()) return state;
  const auto nf = static_cast<Eigen::Index>(free.size());
  const auto& nl = params.nonlinearity();
  auto piece = [&nl](Scalar v) { return v < nl.beta1() ? -1 : (v > nl.beta2() ? 1 : 0); };
  auto residual = [&](const Vector<Scalar>& v) {
    const Vector<Scalar> g = energy_gradient(params, v);
    Scalar m = Scalar(0);
    for (auto i : free) m = std::max(m, Scalar(std::abs(g[i])));
    return m;
  };

  for (int round = 0; round < rounds; ++round) {
    const Vector<Scalar> grad = energy_gradient(params, state.values);
    const Matrix<Scalar> jac = drive_jacobian(params, state.values, Scalar(0)).matrix;
    Matrix<Scalar> a(nf, nf);
    Vector<Scalar> rhs(nf);
    for (Eigen::Index r = 0; r < nf; ++r) {
      rhs[r] = grad[free[static_cast<std::size_t>(r)]];
      for (Eigen::Index c = 0; c < nf; ++c) {
        a(r, c) = (r == c ? Scalar(1) : Scalar(0)) - jac(free[static_cast<std::size_t>(r)], free[static_cast<std::size_t>(c)]);
      }
    }
    const Vector<Scalar> step = a.fullPivLu().solve(rhs);
    Vector<Scalar> candidate = state.values;
    bool same_piece = true;
    for (Eigen::Index r = 0; r < nf; ++r) {
      const auto i = free[static_cast<std::size_t>(r)];
      candidate[i] -= step[r];
      same_piece = same_piece && piece(candidate[i]) == piece(state.values[i]);
    }
    if (!same_piece || !step.allFinite()) break;
    if (!(residual(candidate) < residual(state.values))) break;
    state.values = std::move(candidate);
  }
  return state;
}

template <typename Scalar = double>
struct TrajectoryStep {
  Vector<Scalar> state;      // s_t
  Vector<Scalar> noise;      // eta_t
  Vector<Scalar> corrupted;  // s_t + eta_t
  Scalar energy{};           // E(s_t)
  Vector<Scalar> delta;      // s_{t+1} - s_t; zero on the terminal record
};

/// num_steps + 1 records: one per visited state, the last one terminal. The
/// terminal record still carries a noise draw so the identity check can
/// reach the final transition.
template <typename Scalar = double>
struct TrajectoryLog {
  std::vector<TrajectoryStep<Scalar>> steps;
  std::vector<ClampMode<Scalar>> clamp;
};

template <typename Scalar>
TrajectoryLog<Scalar> langevin_chain(const NetworkParams<Scalar>& params, const StateVector<Scalar>& init,
                                     const DynamicsConfig& config, long num_steps) {
  config.validate();
  if (num_steps < 1) throw Error(ErrorCode::kInvalidConfig, "num_steps: must be >= 1");
  const auto eps = static_cast<Scalar>(config.epsilon);
  Rng rng(config.seed);
  TrajectoryLog<Scalar> log;
  log.clamp = init.clamp;
  log.steps.reserve(static_cast<std::size_t>(num_steps) + 1);
  StateVector<Scalar> cur = init;
  for (long t = 0; t <= num_steps; ++t) {
    TrajectoryStep<Scalar> rec;
    rec.state = cur.values;
    rec.noise = draw_noise<Scalar>(cur.size(), config.sigma, rng);
    rec.corrupted = rec.state + rec.noise;
    rec.energy = energy(params, rec.state);
    if (t < num_steps) {
      Vector<Scalar> next = step_with_noise(params, cur, eps, rec.noise);
      rec.delta = next - cur.values;
      cur.values = std::move(next);
    } else {
      rec.delta = Vector<Scalar>::Zero(cur.values.size());
    }
    log.steps.push_back(std::move(rec));
  }
  return log;
}

/// Maximum discrepancy, over free units and transitions, between the logged
/// next corrupted state and s~_t - eps dE(s~_t)/ds~ + eta_{t+1} - (1-eps) eta_t.
template <typename Scalar>
double verify_langevin_identity(const NetworkParams<Scalar>& params, const TrajectoryLog<Scalar>& log,
                                const DynamicsConfig& config) {
  const auto eps = static_cast<Scalar>(config.epsilon);
  for (const auto& rec : log.steps) {
    if (rec.noise.size() != rec.state.size() || rec.corrupted.size() != rec.state.size()) {
      throw Error(ErrorCode::kMissingNoiseLog, "trajectory lacks per-step noise records");
    }
  }
  Scalar worst = Scalar(0);
  for (std::size_t t = 0; t + 1 < log.steps.size(); ++t) {
    const auto& cur = log.steps[t];
    const auto& nxt = log.steps[t + 1];
    // (a) the logged update, (b) the noisy-state gradient-descent form.
    const Vector<Scalar> direct = cur.state + cur.delta + nxt.noise;
    const Vector<Scalar> noisy = cur.state + cur.noise;
    const Vector<Scalar> rearranged =
        noisy - eps * energy_gradient(params, noisy) + nxt.noise - (Scalar(1) - eps) * cur.noise;
    for (std::size_t i = 0; i < log.clamp.size(); ++i) {
      if (log.clamp[i].kind != ClampKind::kFree) continue;
      const auto ii = static_cast<Eigen::Index>(i);
      using std::abs;
      worst = std::max(worst, Scalar(abs(direct[ii] - rearranged[ii])));
    }
  }
  return static_cast<double>(worst);
}

}  // namespace energynet
