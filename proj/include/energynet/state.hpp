#pragma once

#include <Eigen/Dense>
#include <vector>

#include "energynet/error.hpp"
#include "energynet/topology.hpp"

namespace energynet {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class ClampKind { kFree, kHardClamped, kWeaklyDriven };

template <typename Scalar = double>
struct ClampMode {
  ClampKind kind = ClampKind::kFree;
  Scalar target = Scalar(0);  // only meaningful for kWeaklyDriven

  static ClampMode free() { return {ClampKind::kFree, Scalar(0)}; }
  static ClampMode hard() { return {ClampKind::kHardClamped, Scalar(0)}; }
  static ClampMode driven(Scalar target) { return {ClampKind::kWeaklyDriven, target}; }

  friend bool operator==(const ClampMode&, const ClampMode&) = default;
};

/// Flat network state with a clamp mode per unit.
template <typename Scalar = double>
struct StateVector {
  Vector<Scalar> values;
  std::vector<ClampMode<Scalar>> clamp;

  StateVector() = default;

  explicit StateVector(std::size_t n)
      : values(Vector<Scalar>::Zero(static_cast<Eigen::Index>(n))), clamp(n) {}

  StateVector(Vector<Scalar> v, std::vector<ClampMode<Scalar>> modes)
      : values(std::move(v)), clamp(std::move(modes)) {
    if (static_cast<std::size_t>(values.size()) != clamp.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "state values and clamp modes differ in length");
    }
  }

  std::size_t size() const noexcept { return clamp.size(); }

  bool is_free(std::size_t i) const { return clamp[i].kind == ClampKind::kFree; }

  auto layer(const LayeredTopology& topo, std::size_t k) const {
    return values.segment(static_cast<Eigen::Index>(topo.offset(k)),
                          static_cast<Eigen::Index>(topo.size(k)));
  }
  auto layer(const LayeredTopology& topo, std::size_t k) {
    return values.segment(static_cast<Eigen::Index>(topo.offset(k)),
                          static_cast<Eigen::Index>(topo.size(k)));
  }

  template <typename Other>
  StateVector<Other> cast() const {
    std::vector<ClampMode<Other>> modes;
    modes.reserve(clamp.size());
    for (const auto& m : clamp) modes.push_back({m.kind, static_cast<Other>(m.target)});
    return StateVector<Other>(values.template cast<Other>(), std::move(modes));
  }

  void set_layer_mode(const LayeredTopology& topo, std::size_t k, ClampMode<Scalar> mode) {
    for (std::size_t u = 0; u < topo.size(k); ++u) clamp[topo.offset(k) + u] = mode;
  }
};

}  // namespace energynet
