#pragma once

#include <optional>
#include <random>
#include <vector>

#include "energynet/backprop_bridge.hpp"

namespace energynet::harness {

struct TopologyRange {
  int min_hidden = 2;
  int max_hidden = 4;
  std::size_t min_size = 2;
  std::size_t max_size = 8;
};

inline LayeredTopology random_topology(Rng& rng, const TopologyRange& range = {}) {
  std::uniform_int_distribution<int> hidden(range.min_hidden, range.max_hidden);
  std::uniform_int_distribution<std::size_t> size(range.min_size, range.max_size);
  const int k = hidden(rng);
  std::vector<std::size_t> layers;
  for (int i = 0; i < k + 2; ++i) layers.push_back(size(rng));
  return LayeredTopology(std::move(layers));
}

inline Vector<double> random_vector(Rng& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Vector<double> v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = unif(rng);
  return v;
}

/// A network, clamped input and output target whose free phase settles
/// with every unit at least `kink_margin` away from both kinks.
struct SettledCase {
  NetworkParams<double> params;
  Vector<double> x;
  Vector<double> y;
  StateVector<double> fixed;
};

struct CaseSampler {
  TopologyRange topology{};
  double init_gain = kDefaultInitGain;
  double kink_margin = 1e-3;
  double input_amplitude = 0.4;
  long max_steps = 20000;
  int max_attempts = 10000;
};

inline std::optional<SettledCase> try_settled_case(Rng& rng, const CaseSampler& s) {
  const auto topo = random_topology(rng, s.topology);
  auto params = random_params<double>(topo, rng, s.init_gain);
  Vector<double> x = random_vector(rng, topo.size(topo.input_layer()), -s.input_amplitude, s.input_amplitude);
  Vector<double> y = random_vector(rng, topo.size(0), -s.input_amplitude, s.input_amplitude);
  DynamicsConfig dyn;
  dyn.max_steps = s.max_steps;
  const auto res = relax_unchecked(params, clamped_input_state(params, x), dyn);
  if (!res.converged) return std::nullopt;
  auto fixed = polish_fixed_point(params, res.state);
  if (!kink_contacts(params, fixed.values, s.kink_margin).empty()) return std::nullopt;
  return SettledCase{std::move(params), std::move(x), std::move(y), std::move(fixed)};
}

struct SampledCases {
  std::vector<SettledCase> cases;
  int attempts = 0;
};

inline SampledCases sample_settled_cases(Rng& rng, std::size_t count, const CaseSampler& s = {}) {
  SampledCases out;
  while (out.cases.size() < count && out.attempts < s.max_attempts) {
    ++out.attempts;
    if (auto c = try_settled_case(rng, s)) out.cases.push_back(std::move(*c));
  }
  return out;
}

}  // namespace energynet::harness
