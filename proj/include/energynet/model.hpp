#pragma once

#include <vector>

#include "energynet/network.hpp"
#include "energynet/state.hpp"

namespace energynet {

namespace detail {

template <typename Scalar>
void check_length(const NetworkParams<Scalar>& params, Eigen::Index n) {
  if (static_cast<std::size_t>(n) != params.num_units()) {
    throw Error(ErrorCode::kDimensionMismatch, "state has " + std::to_string(n) + " units, network has " +
                                                   std::to_string(params.num_units()));
  }
}

}  // namespace detail

template <typename Scalar>
Vector<Scalar> rates(const HardSigmoid<Scalar>& nl, const Vector<Scalar>& s) {
  return s.unaryExpr([&nl](Scalar v) { return nl.rate(v); });
}

template <typename Scalar>
Vector<Scalar> slopes(const HardSigmoid<Scalar>& nl, const Vector<Scalar>& s) {
  return s.unaryExpr([&nl](Scalar v) { return nl.slope(v); });
}

/// Net input b_i + sum_j W_ij rho(s_j), computed block by block.
template <typename Scalar>
Vector<Scalar> net_input(const NetworkParams<Scalar>& params, const Vector<Scalar>& s) {
  detail::check_length(params, s.size());
  const auto& topo = params.topology();
  const Vector<Scalar> r = rates(params.nonlinearity(), s);
  Vector<Scalar> in = params.biases();
  for (std::size_t k = 0; k < topo.num_blocks(); ++k) {
    const auto up = static_cast<Eigen::Index>(topo.offset(k));
    const auto lo = static_cast<Eigen::Index>(topo.offset(k + 1));
    const auto& w = params.block(k);
    in.segment(up, w.rows()).noalias() += w * r.segment(lo, w.cols());
    in.segment(lo, w.cols()).noalias() += w.transpose() * r.segment(up, w.rows());
  }
  return in;
}

/// E(s) = sum s_i^2/2 - 1/2 sum_{i!=j} W_ij rho_i rho_j - sum b_i rho_i.
template <typename Scalar>
Scalar energy(const NetworkParams<Scalar>& params, const Vector<Scalar>& s) {
  detail::check_length(params, s.size());
  const auto& topo = params.topology();
  const Vector<Scalar> r = rates(params.nonlinearity(), s);
  Scalar e = Scalar(0.5) * s.squaredNorm() - params.biases().dot(r);
  // Each block appears twice in the ordered double sum; the 1/2 cancels one.
  for (std::size_t k = 0; k < topo.num_blocks(); ++k) {
    const auto& w = params.block(k);
    e -= r.segment(static_cast<Eigen::Index>(topo.offset(k)), w.rows())
             .dot(w * r.segment(static_cast<Eigen::Index>(topo.offset(k + 1)), w.cols()));
  }
  return e;
}

template <typename Scalar>
Scalar energy(const NetworkParams<Scalar>& params, const StateVector<Scalar>& state) {
  return energy(params, state.values);
}

/// R_i(s) = rho'(s_i) (b_i + sum_j W_ij rho(s_j)).
template <typename Scalar>
Vector<Scalar> drive(const NetworkParams<Scalar>& params, const Vector<Scalar>& s) {
  return slopes(params.nonlinearity(), s).cwiseProduct(net_input(params, s));
}

template <typename Scalar>
Vector<Scalar> drive(const NetworkParams<Scalar>& params, const StateVector<Scalar>& state) {
  return drive(params, state.values);
}

/// dE/ds = s - R(s).
template <typename Scalar>
Vector<Scalar> energy_gradient(const NetworkParams<Scalar>& params, const Vector<Scalar>& s) {
  return s - drive(params, s);
}

template <typename Scalar>
Vector<Scalar> energy_gradient(const NetworkParams<Scalar>& params, const StateVector<Scalar>& state) {
  return energy_gradient(params, state.values);
}

/// Flat indices of units closer than `margin` to either kink.
template <typename Scalar>
std::vector<std::size_t> kink_contacts(const NetworkParams<Scalar>& params, const Vector<Scalar>& s,
                                       Scalar margin) {
  detail::check_length(params, s.size());
  std::vector<std::size_t> hits;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (params.nonlinearity().kink_distance(s[i]) < margin) hits.push_back(static_cast<std::size_t>(i));
  }
  return hits;
}

template <typename Scalar>
struct DriveJacobian {
  Matrix<Scalar> matrix;                  // dR_i/ds_j
  std::vector<std::size_t> kink_contacts;  // units within the margin of a kink
};

/// dR_i/ds_j = rho'(s_i) W_ij rho'(s_j). rho'' vanishes off the kinks and the
/// diagonal of W is zero, so the diagonal of the Jacobian is zero. Units near
/// a kink are reported; the matrix still uses the closed-interval slope.
template <typename Scalar>
DriveJacobian<Scalar> drive_jacobian(const NetworkParams<Scalar>& params, const Vector<Scalar>& s,
                                     Scalar kink_margin = Scalar(1e-3)) {
  detail::check_length(params, s.size());
  const Vector<Scalar> d = slopes(params.nonlinearity(), s);
  DriveJacobian<Scalar> out;
  out.matrix = d.asDiagonal() * params.global_weights() * d.asDiagonal();
  out.kink_contacts = kink_contacts(params, s, kink_margin);
  return out;
}

}  // namespace energynet
