#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "energynet/backprop_bridge.hpp"
#include "energynet/dataset.hpp"

namespace energynet {

struct LearningConfig {
  double base_rate = 0.1;
  bool per_layer_rescale = true;  // scale block k by eps^-(k+1)
  int nudge_steps = 3;
  bool symmetrize_updates = true;
  bool update_biases = false;  // not part of the rate-times-rate rule; off by default
  int epochs = 200;
  double epsilon = 0.05;
  double sigma = 0.0;
  double tolerance = 1e-10;
  long max_steps = 100000;
  std::uint64_t seed = 42;

  void validate() const {
    if (!(base_rate > 0.0)) throw Error(ErrorCode::kInvalidConfig, "base_rate: must be > 0");
    if (nudge_steps < 1) throw Error(ErrorCode::kInvalidConfig, "nudge_steps: must be >= 1");
    if (epochs < 0) throw Error(ErrorCode::kInvalidConfig, "epochs: must be >= 0");
    dynamics().validate();
  }

  DynamicsConfig dynamics() const { return {epsilon, sigma, tolerance, max_steps, seed}; }
};

/// Per-block weight changes in both directions. forward[k] updates the
/// (layer k <- layer k+1) weights, backward[k] the (layer k+1 <- layer k)
/// weights; for symmetric updates backward[k] == forward[k]^T.
struct WeightDeltas {
  std::vector<Matrix<double>> forward;
  std::vector<Matrix<double>> backward;
  Vector<double> biases;

  static WeightDeltas zeros(const LayeredTopology& topo) {
    WeightDeltas d;
    for (std::size_t k = 0; k < topo.num_blocks(); ++k) {
      const auto r = NetworkParams<double>::rows(topo, k);
      const auto c = NetworkParams<double>::cols(topo, k);
      d.forward.push_back(Matrix<double>::Zero(r, c));
      d.backward.push_back(Matrix<double>::Zero(c, r));
    }
    d.biases = Vector<double>::Zero(static_cast<Eigen::Index>(topo.num_units()));
    return d;
  }

  WeightDeltas& operator+=(const WeightDeltas& o) {
    for (std::size_t k = 0; k < forward.size(); ++k) {
      forward[k] += o.forward[k];
      backward[k] += o.backward[k];
    }
    biases += o.biases;
    return *this;
  }

  void scale_block(std::size_t k, double factor) {
    forward[k] *= factor;
    backward[k] *= factor;
  }

  double max_abs() const {
    double m = biases.size() ? biases.cwiseAbs().maxCoeff() : 0.0;
    for (std::size_t k = 0; k < forward.size(); ++k) {
      m = std::max({m, forward[k].cwiseAbs().maxCoeff(), backward[k].cwiseAbs().maxCoeff()});
    }
    return m;
  }

  // Forward blocks then biases, for direction comparisons.
  Vector<double> flatten_forward(bool with_biases) const {
    Eigen::Index n = with_biases ? biases.size() : 0;
    for (const auto& f : forward) n += f.size();
    Vector<double> out(n);
    Eigen::Index at = 0;
    for (const auto& f : forward) {
      for (Eigen::Index i = 0; i < f.rows(); ++i) {
        for (Eigen::Index j = 0; j < f.cols(); ++j) out[at++] = f(i, j);
      }
    }
    if (with_biases) out.segment(at, biases.size()) = biases;
    return out;
  }
};

/// Rescale factor eps^-(k+1) for the block whose output-side layer is k.
inline double layer_rescale(std::size_t k, double epsilon) {
  return std::pow(epsilon, -static_cast<double>(k + 1));
}

/// Rate-of-change times pre-synaptic rate: D_ij = eta * (s_after - s_before)_i * rho(s_before_j).
template <typename Scalar>
WeightDeltas stdp_update(const NetworkParams<Scalar>& params, const StateVector<Scalar>& before,
                         const StateVector<Scalar>& after, const LearningConfig& cfg) {
  detail::check_length(params, before.values.size());
  detail::check_length(params, after.values.size());
  const auto& topo = params.topology();
  const Vector<double> sdot = (after.values - before.values).template cast<double>();
  const Vector<double> r = rates(params.nonlinearity(), before.values).template cast<double>();
  const double eta = cfg.base_rate;

  WeightDeltas d;
  for (std::size_t k = 0; k < topo.num_blocks(); ++k) {
    const Vector<double> sdot_up = layer_of(topo, sdot, k);
    const Vector<double> sdot_lo = layer_of(topo, sdot, k + 1);
    const Vector<double> r_up = layer_of(topo, r, k);
    const Vector<double> r_lo = layer_of(topo, r, k + 1);
    Matrix<double> fwd = eta * sdot_up * r_lo.transpose();
    Matrix<double> bwd = eta * sdot_lo * r_up.transpose();
    if (cfg.symmetrize_updates) {
      Matrix<double> sym = 0.5 * (fwd + bwd.transpose());
      bwd = sym.transpose();
      fwd = std::move(sym);
    }
    d.forward.push_back(std::move(fwd));
    d.backward.push_back(std::move(bwd));
  }
  d.biases = cfg.update_biases ? Vector<double>(eta * sdot)
                               : Vector<double>(Vector<double>::Zero(sdot.size()));
  return d;
}

/// -eta dC/dW at the fixed point, one block at a time:
/// (rho'(upper) * g_upper) outer rho(lower), with g from the backprop oracle.
inline WeightDeltas reference_sgd_at(const NetworkParams<double>& params, const StateVector<double>& fixed,
                                     const Vector<double>& y, const LearningConfig& cfg) {
  const auto& topo = params.topology();
  const auto& nl = params.nonlinearity();
  const auto oracle = backprop_oracle(params, fixed, y);
  const Vector<double> r = rates(nl, fixed.values);
  const Vector<double> d = slopes(nl, fixed.values);
  WeightDeltas out = WeightDeltas::zeros(topo);
  for (std::size_t k = 0; k < topo.num_blocks(); ++k) {
    const Vector<double> local = layer_of(topo, d, k).cwiseProduct(oracle.layers[k]);
    out.forward[k] = -cfg.base_rate * local * layer_of(topo, r, k + 1).transpose();
    out.backward[k] = out.forward[k].transpose();
    if (cfg.update_biases) {
      out.biases.segment(static_cast<Eigen::Index>(topo.offset(k)), local.size()) = -cfg.base_rate * local;
    }
  }
  return out;
}

inline WeightDeltas reference_sgd_update(const NetworkParams<double>& params, const Vector<double>& x,
                                         const Vector<double>& y, const LearningConfig& cfg) {
  const auto fixed = settle(params, x, cfg.dynamics());
  return reference_sgd_at(params, fixed.state, y, cfg);
}

/// Weights as two directed block sets. The energy only sees their symmetric
/// average; keeping both lets unsymmetrized updates drift apart measurably.
class PlasticNetwork {
 public:
  explicit PlasticNetwork(const NetworkParams<double>& init)
      : topology_(init.topology()), forward_(init.blocks()), biases_(init.biases()), nl_(init.nonlinearity()) {
    for (const auto& b : forward_) backward_.push_back(b.transpose());
  }

  NetworkParams<double> params() const {
    return assemble_symmetric<double>(topology_, forward_, backward_, biases_, nl_);
  }

  void apply(const WeightDeltas& d) {
    for (std::size_t k = 0; k < forward_.size(); ++k) {
      forward_[k] += d.forward[k];
      backward_[k] += d.backward[k];
    }
    biases_ += d.biases;
  }

  /// max |W_ij - W_ji| over the directed weights.
  double asymmetry() const {
    double m = 0.0;
    for (std::size_t k = 0; k < forward_.size(); ++k) {
      m = std::max(m, (forward_[k] - backward_[k].transpose()).cwiseAbs().maxCoeff());
    }
    return m;
  }

  const std::vector<Matrix<double>>& forward() const noexcept { return forward_; }
  const std::vector<Matrix<double>>& backward() const noexcept { return backward_; }

 private:
  LayeredTopology topology_;
  std::vector<Matrix<double>> forward_;
  std::vector<Matrix<double>> backward_;
  Vector<double> biases_;
  HardSigmoid<double> nl_;
};

struct TrainMetrics {
  int epoch = 0;
  double mse = 0.0;  // after the epoch's updates
  double cosine_stdp_vs_sgd = 0.0;
  double weight_asymmetry = 0.0;
  std::size_t skipped_examples = 0;
};

struct MseResult {
  double mse = 0.0;
  std::size_t skipped = 0;
};

/// Mean over examples and output units of (y^ - y)^2, with settled outputs
/// polished as in settle(). An example whose free phase does not settle contributes its output after max_steps and is
/// counted as unsettled.
inline MseResult evaluate_mse(const NetworkParams<double>& params, const Dataset& data, const DynamicsConfig& dyn) {
  MseResult out;
  double total = 0.0;
  for (const auto& ex : data.examples) {
    auto res = relax_unchecked(params, clamped_input_state(params, ex.x), dyn);
    if (res.converged) {
      res.state = polish_fixed_point(params, std::move(res.state));
    } else {
      ++out.skipped;
    }
    total += (layer_of(params.topology(), res.state.values, 0) - ex.y).squaredNorm() /
             static_cast<double>(ex.y.size());
  }
  out.mse = data.examples.empty() ? 0.0 : total / static_cast<double>(data.examples.size());
  return out;
}

struct NudgeOutcome {
  WeightDeltas stdp;
  WeightDeltas sgd;
};

/// Driven phase for one example starting from its free-phase fixed point:
/// accumulate the rescaled STDP deltas over nudge_steps noisy steps.
inline NudgeOutcome nudge_phase(const NetworkParams<double>& params, const StateVector<double>& fixed,
                                const Vector<double>& y, const LearningConfig& cfg, Rng& rng) {
  const auto& topo = params.topology();
  const DynamicsConfig dyn = cfg.dynamics();
  StateVector<double> cur = fixed;
  for (std::size_t u = 0; u < topo.size(0); ++u) {
    cur.clamp[u] = ClampMode<double>::driven(y[static_cast<Eigen::Index>(u)]);
  }
  NudgeOutcome out{WeightDeltas::zeros(topo), reference_sgd_at(params, fixed, y, cfg)};
  for (int t = 0; t < cfg.nudge_steps; ++t) {
    StateVector<double> next = step(params, cur, dyn, rng);
    out.stdp += stdp_update(params, cur, next, cfg);
    cur = std::move(next);
  }
  if (cfg.per_layer_rescale) {
    for (std::size_t k = 0; k < topo.num_blocks(); ++k) out.stdp.scale_block(k, layer_rescale(k, cfg.epsilon));
    for (std::size_t k = 0; k < topo.num_layers(); ++k) {
      out.stdp.biases.segment(static_cast<Eigen::Index>(topo.offset(k)), static_cast<Eigen::Index>(topo.size(k))) *=
          layer_rescale(k, cfg.epsilon);
    }
  }
  return out;
}

/// One pass over the data: free phase, driven phase, apply the accumulated
/// STDP change, per example in dataset order. Examples whose free phase does
/// not settle are skipped and counted.
inline TrainMetrics train_epoch(PlasticNetwork& net, const Dataset& data, const LearningConfig& cfg, Rng& rng,
                                int epoch) {
  cfg.validate();
  if (data.examples.empty()) throw Error(ErrorCode::kSizeMismatch, "training set is empty");
  const DynamicsConfig dyn = cfg.dynamics();
  TrainMetrics m;
  m.epoch = epoch;
  double cos_sum = 0.0;
  std::size_t used = 0;
  for (const auto& ex : data.examples) {
    const NetworkParams<double> params = net.params();
    RelaxResult<double> fixed;
    try {
      fixed = settle(params, ex.x, dyn);
    } catch (const NonConvergence&) {
      ++m.skipped_examples;
      continue;
    }
    const auto outcome = nudge_phase(params, fixed.state, ex.y, cfg, rng);
    cos_sum += cosine(outcome.stdp.flatten_forward(cfg.update_biases), outcome.sgd.flatten_forward(cfg.update_biases));
    ++used;
    net.apply(outcome.stdp);
    m.weight_asymmetry = std::max(m.weight_asymmetry, net.asymmetry());
  }
  m.cosine_stdp_vs_sgd = used ? cos_sum / static_cast<double>(used) : 0.0;
  m.mse = evaluate_mse(net.params(), data, dyn).mse;
  return m;
}

struct TrainResult {
  NetworkParams<double> params;
  double initial_mse = 0.0;
  std::vector<TrainMetrics> history;
};

inline TrainResult train(const NetworkParams<double>& init, const Dataset& data, const LearningConfig& cfg) {
  cfg.validate();
  PlasticNetwork net(init);
  Rng rng(cfg.seed);
  TrainResult out;
  out.initial_mse = evaluate_mse(init, data, cfg.dynamics()).mse;
  for (int e = 1; e <= cfg.epochs; ++e) out.history.push_back(train_epoch(net, data, cfg, rng, e));
  out.params = net.params();
  return out;
}

}  // namespace energynet
