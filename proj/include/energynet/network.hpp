#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "energynet/error.hpp"
#include "energynet/hard_sigmoid.hpp"
#include "energynet/state.hpp"
#include "energynet/topology.hpp"

namespace energynet {

/// Symmetric layered network. Block k couples layer k (rows, output side)
/// with layer k+1 (columns, input side); the global weight matrix holds the
/// block above the diagonal and its transpose below it. No other couplings
/// exist, so W is symmetric with a zero diagonal by construction.
template <typename Scalar = double>
class NetworkParams {
 public:
  NetworkParams() = default;

  NetworkParams(LayeredTopology topology, std::vector<Matrix<Scalar>> blocks, Vector<Scalar> biases,
                HardSigmoid<Scalar> nl = {})
      : topology_(std::move(topology)), blocks_(std::move(blocks)), biases_(std::move(biases)), nl_(nl) {
    check_block_shapes(topology_, blocks_);
    if (static_cast<std::size_t>(biases_.size()) != topology_.num_units()) {
      throw Error(ErrorCode::kShapeMismatch, "bias vector length does not match unit count");
    }
  }

  // Zero weights and biases.
  static NetworkParams zeros(LayeredTopology topology, HardSigmoid<Scalar> nl = {}) {
    std::vector<Matrix<Scalar>> blocks;
    for (std::size_t k = 0; k < topology.num_blocks(); ++k) {
      blocks.push_back(Matrix<Scalar>::Zero(rows(topology, k), cols(topology, k)));
    }
    Vector<Scalar> b = Vector<Scalar>::Zero(static_cast<Eigen::Index>(topology.num_units()));
    return NetworkParams(std::move(topology), std::move(blocks), std::move(b), nl);
  }

  const LayeredTopology& topology() const noexcept { return topology_; }
  const std::vector<Matrix<Scalar>>& blocks() const noexcept { return blocks_; }
  const Matrix<Scalar>& block(std::size_t k) const { return blocks_.at(k); }
  const Vector<Scalar>& biases() const noexcept { return biases_; }
  const HardSigmoid<Scalar>& nonlinearity() const noexcept { return nl_; }
  std::size_t num_units() const noexcept { return topology_.num_units(); }

  Matrix<Scalar>& mutable_block(std::size_t k) { return blocks_.at(k); }
  Vector<Scalar>& mutable_biases() { return biases_; }

  /// Dense N x N weight matrix implied by the blocks.
  Matrix<Scalar> global_weights() const {
    const auto n = static_cast<Eigen::Index>(num_units());
    Matrix<Scalar> w = Matrix<Scalar>::Zero(n, n);
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const auto r0 = static_cast<Eigen::Index>(topology_.offset(k));
      const auto c0 = static_cast<Eigen::Index>(topology_.offset(k + 1));
      w.block(r0, c0, blocks_[k].rows(), blocks_[k].cols()) = blocks_[k];
      w.block(c0, r0, blocks_[k].cols(), blocks_[k].rows()) = blocks_[k].transpose();
    }
    return w;
  }

  template <typename Other>
  NetworkParams<Other> cast() const {
    std::vector<Matrix<Other>> blocks;
    for (const auto& b : blocks_) blocks.push_back(b.template cast<Other>());
    return NetworkParams<Other>(topology_, std::move(blocks), biases_.template cast<Other>(),
                                HardSigmoid<Other>(static_cast<Other>(nl_.beta1())));
  }

  static Eigen::Index rows(const LayeredTopology& t, std::size_t k) {
    return static_cast<Eigen::Index>(t.size(k));
  }
  static Eigen::Index cols(const LayeredTopology& t, std::size_t k) {
    return static_cast<Eigen::Index>(t.size(k + 1));
  }

  static void check_block_shapes(const LayeredTopology& t, const std::vector<Matrix<Scalar>>& blocks) {
    if (blocks.size() != t.num_blocks()) {
      throw Error(ErrorCode::kShapeMismatch, "expected " + std::to_string(t.num_blocks()) +
                                                 " weight blocks, got " + std::to_string(blocks.size()));
    }
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      if (blocks[k].rows() != rows(t, k) || blocks[k].cols() != cols(t, k)) {
        throw Error(ErrorCode::kShapeMismatch, "weight block " + std::to_string(k) + " has wrong shape");
      }
    }
  }

 private:
  LayeredTopology topology_;
  std::vector<Matrix<Scalar>> blocks_;
  Vector<Scalar> biases_;
  HardSigmoid<Scalar> nl_;
};

/// Builds parameters from per-pair weight blocks. `forward[k]` is the
/// (layer k <- layer k+1) block, shape n_k x n_{k+1}. When a `backward[k]`
/// block (layer k+1 <- layer k, shape n_{k+1} x n_k) is supplied the stored
/// block is the average (forward + backward^T) / 2, which is what the drive
/// would see from an asymmetric weight pair anyway.
template <typename Scalar>
NetworkParams<Scalar> assemble_symmetric(const LayeredTopology& topology,
                                         const std::vector<Matrix<Scalar>>& forward,
                                         const std::optional<std::vector<Matrix<Scalar>>>& backward,
                                         Vector<Scalar> biases, HardSigmoid<Scalar> nl = {}) {
  NetworkParams<Scalar>::check_block_shapes(topology, forward);
  std::vector<Matrix<Scalar>> blocks = forward;
  if (backward) {
    if (backward->size() != forward.size()) {
      throw Error(ErrorCode::kShapeMismatch, "forward and backward block counts differ");
    }
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const auto& back = (*backward)[k];
      if (back.rows() != blocks[k].cols() || back.cols() != blocks[k].rows()) {
        throw Error(ErrorCode::kShapeMismatch,
                    "backward block " + std::to_string(k) + " is not the transpose shape of forward");
      }
      blocks[k] = Scalar(0.5) * (forward[k] + back.transpose());
    }
  }
  return NetworkParams<Scalar>(topology, std::move(blocks), std::move(biases), nl);
}

// With gain 1 almost no random net has a fixed point: some unit's drive lands
// outside the linear region and it chatters around a kink forever.
inline constexpr double kDefaultInitGain = 0.5;

/// Uniform weights in [-w0, w0] with w0 = scale / sqrt(fan_in), where fan-in
/// of block k is the size of its input-side layer k+1. Biases are zero.
template <typename Scalar = double, typename Rng>
NetworkParams<Scalar> random_params(const LayeredTopology& topology, Rng& rng, Scalar scale = Scalar(kDefaultInitGain),
                                    HardSigmoid<Scalar> nl = {}) {
  std::vector<Matrix<Scalar>> blocks;
  for (std::size_t k = 0; k < topology.num_blocks(); ++k) {
    const Scalar w0 = scale / std::sqrt(static_cast<Scalar>(topology.size(k + 1)));
    std::uniform_real_distribution<double> dist(-static_cast<double>(w0), static_cast<double>(w0));
    Matrix<Scalar> b(NetworkParams<Scalar>::rows(topology, k), NetworkParams<Scalar>::cols(topology, k));
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = static_cast<Scalar>(dist(rng));
    }
    blocks.push_back(std::move(b));
  }
  Vector<Scalar> biases = Vector<Scalar>::Zero(static_cast<Eigen::Index>(topology.num_units()));
  return NetworkParams<Scalar>(topology, std::move(blocks), std::move(biases), nl);
}

}  // namespace energynet
