#pragma once

#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "energynet/error.hpp"

namespace energynet {

/// Layer sizes in output-to-input order: [n_y, n_h1, ..., n_hK, n_x].
/// Units are laid out contiguously in that order in the flat state.
class LayeredTopology {
 public:
  LayeredTopology() = default;

  explicit LayeredTopology(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
    if (sizes_.size() < 3) {
      throw Error(ErrorCode::kInvalidConfig,
                  "layers: need at least 3 layers (output, hidden, input), got " +
                      std::to_string(sizes_.size()));
    }
    offsets_.reserve(sizes_.size() + 1);
    offsets_.push_back(0);
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
      if (sizes_[k] == 0) {
        throw Error(ErrorCode::kInvalidConfig, "layers: layer " + std::to_string(k) + " is empty");
      }
      offsets_.push_back(offsets_.back() + sizes_[k]);
    }
  }

  const std::vector<std::size_t>& layer_sizes() const noexcept { return sizes_; }
  std::size_t num_layers() const noexcept { return sizes_.size(); }
  std::size_t num_hidden() const noexcept { return sizes_.size() - 2; }
  std::size_t num_units() const noexcept { return offsets_.empty() ? 0 : offsets_.back(); }
  std::size_t num_blocks() const noexcept { return sizes_.size() - 1; }

  std::size_t size(std::size_t layer) const { return sizes_.at(layer); }
  std::size_t offset(std::size_t layer) const { return offsets_.at(layer); }

  std::size_t output_layer() const noexcept { return 0; }
  std::size_t input_layer() const noexcept { return sizes_.size() - 1; }

  std::size_t index(std::size_t layer, std::size_t unit) const {
    if (unit >= size(layer)) {
      throw Error(ErrorCode::kDimensionMismatch, "unit index out of range for layer");
    }
    return offsets_[layer] + unit;
  }

  // Inverse of index(): (layer, within-layer unit) for a flat index.
  std::pair<std::size_t, std::size_t> locate(std::size_t flat) const {
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
      if (flat < offsets_[k + 1]) return {k, flat - offsets_[k]};
    }
    throw Error(ErrorCode::kDimensionMismatch, "flat index out of range");
  }

  friend bool operator==(const LayeredTopology& a, const LayeredTopology& b) {
    return a.sizes_ == b.sizes_;
  }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
};

}  // namespace energynet
