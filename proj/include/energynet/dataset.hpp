#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "energynet/backprop_bridge.hpp"

namespace energynet {

struct Example {
  Vector<double> x;
  Vector<double> y;
};

enum class DatasetKind { kXor, kRandomTeacher, kIdentity };

inline const char* to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kXor: return "xor";
    case DatasetKind::kRandomTeacher: return "random_teacher";
    case DatasetKind::kIdentity: return "identity";
  }
  return "?";
}

inline DatasetKind parse_dataset_kind(const std::string& name) {
  if (name == "xor") return DatasetKind::kXor;
  if (name == "random_teacher") return DatasetKind::kRandomTeacher;
  if (name == "identity") return DatasetKind::kIdentity;
  throw Error(ErrorCode::kInvalidConfig, "dataset: unknown kind '" + name + "'");
}

struct Dataset {
  std::vector<Example> examples;
  std::string generator;  // kind name
  std::uint64_t seed = 0;
  std::size_t skipped = 0;  // random_teacher inputs the teacher failed to settle on
};

// Inputs are drawn inside the linear region of the default hard sigmoid.
inline constexpr double kInputAmplitude = 0.4;

/// Synthetic tasks. `teacher_seed` initializes the random teacher exactly as
/// random_params would initialize a student with that seed.
inline Dataset generate_dataset(DatasetKind kind, const LayeredTopology& topo, std::size_t n, std::uint64_t seed,
                                std::uint64_t teacher_seed, const DynamicsConfig& dynamics = {}) {
  const std::size_t n_y = topo.size(topo.output_layer());
  const std::size_t n_x = topo.size(topo.input_layer());
  Dataset ds;
  ds.generator = to_string(kind);
  ds.seed = seed;
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(-kInputAmplitude, kInputAmplitude);
  auto draw_x = [&] {
    Vector<double> x(static_cast<Eigen::Index>(n_x));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = unif(rng);
    return x;
  };

  switch (kind) {
    case DatasetKind::kXor: {
      if (n_x != 2 || n_y != 1) {
        throw Error(ErrorCode::kSizeMismatch, "xor needs 2 inputs and 1 output");
      }
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          Example ex{Vector<double>(2), Vector<double>(1)};
          ex.x << (a ? kInputAmplitude : -kInputAmplitude), (b ? kInputAmplitude : -kInputAmplitude);
          ex.y << ((a ^ b) ? kInputAmplitude : -kInputAmplitude);
          ds.examples.push_back(std::move(ex));
        }
      }
      break;
    }
    case DatasetKind::kRandomTeacher: {
      if (n == 0) throw Error(ErrorCode::kSizeMismatch, "random_teacher needs n >= 1");
      Rng teacher_rng(teacher_seed);
      const auto teacher = random_params<double>(topo, teacher_rng);
      const std::size_t max_attempts = 20 * n;
      for (std::size_t attempt = 0; ds.examples.size() < n && attempt < max_attempts; ++attempt) {
        Vector<double> x = draw_x();
        try {
          const auto fixed = settle(teacher, x, dynamics);
          ds.examples.push_back({std::move(x), layer_of(topo, fixed.state.values, 0)});
        } catch (const NonConvergence&) {
          ++ds.skipped;
        }
      }
      if (ds.examples.size() < n) {
        throw Error(ErrorCode::kNonConvergence, "random teacher failed to settle on enough inputs");
      }
      break;
    }
    case DatasetKind::kIdentity: {
      if (n == 0) throw Error(ErrorCode::kSizeMismatch, "identity needs n >= 1");
      for (std::size_t e = 0; e < n; ++e) {
        Vector<double> x = draw_x();
        Vector<double> y = Vector<double>::Zero(static_cast<Eigen::Index>(n_y));
        const auto m = static_cast<Eigen::Index>(std::min(n_x, n_y));
        y.head(m) = x.head(m);
        ds.examples.push_back({std::move(x), std::move(y)});
      }
      break;
    }
  }
  return ds;
}

}  // namespace energynet
