#pragma once

// Independent reference computations used only by the tests. They work from
// the block description and scalar loops, never from the library's assembled
// global matrix or vectorized helpers.

#include <cmath>
#include <vector>

#include "energynet/energynet.hpp"

namespace oracle {

using energynet::LayeredTopology;
using energynet::NetworkParams;
using energynet::Vector;

inline double rho(double beta1, double s) { return s <= beta1 ? 0.0 : (s >= beta1 + 1.0 ? 1.0 : s - beta1); }
inline double rho_prime(double beta1, double s) { return (s >= beta1 && s <= beta1 + 1.0) ? 1.0 : 0.0; }

// W_ij for flat indices, read from the blocks.
inline double weight(const NetworkParams<double>& p, std::size_t i, std::size_t j) {
  const auto& t = p.topology();
  const auto [li, ui] = t.locate(i);
  const auto [lj, uj] = t.locate(j);
  if (lj == li + 1) return p.block(li)(static_cast<Eigen::Index>(ui), static_cast<Eigen::Index>(uj));
  if (li == lj + 1) return p.block(lj)(static_cast<Eigen::Index>(uj), static_cast<Eigen::Index>(ui));
  return 0.0;
}

// E = 1/2 sum s_i^2 - 1/2 sum_{i != j} W_ij rho_i rho_j - sum b_i rho_i
inline double energy(const NetworkParams<double>& p, const Vector<double>& s) {
  const double b1 = p.nonlinearity().beta1();
  const std::size_t n = p.num_units();
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double si = s[static_cast<Eigen::Index>(i)];
    e += 0.5 * si * si - p.biases()[static_cast<Eigen::Index>(i)] * rho(b1, si);
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) e -= 0.5 * weight(p, i, j) * rho(b1, si) * rho(b1, s[static_cast<Eigen::Index>(j)]);
    }
  }
  return e;
}

inline Vector<double> drive(const NetworkParams<double>& p, const Vector<double>& s) {
  const double b1 = p.nonlinearity().beta1();
  const std::size_t n = p.num_units();
  Vector<double> r(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double net = p.biases()[static_cast<Eigen::Index>(i)];
    for (std::size_t j = 0; j < n; ++j) net += weight(p, i, j) * rho(b1, s[static_cast<Eigen::Index>(j)]);
    r[static_cast<Eigen::Index>(i)] = rho_prime(b1, s[static_cast<Eigen::Index>(i)]) * net;
  }
  return r;
}

// Central-difference derivative of a scalar function of one coordinate.
template <typename F>
double central(F&& f, double at, double h) {
  return (f(at + h) - f(at - h)) / (2.0 * h);
}

// Feedforward read-out from layer k down to the output: layer k is replaced by
// `hk`, then layers k-1, ..., 0 are recomputed from the drive in turn, and the
// squared error of the output against y is returned. Its gradient with
// respect to hk is the backprop signal for layer k.
inline double downstream_cost(const NetworkParams<double>& p, Vector<double> s, std::size_t k, const Vector<double>& hk,
                              const Vector<double>& y) {
  const auto& t = p.topology();
  s.segment(static_cast<Eigen::Index>(t.offset(k)), hk.size()) = hk;
  for (std::size_t j = k; j-- > 0;) {
    const Vector<double> r = drive(p, s);
    s.segment(static_cast<Eigen::Index>(t.offset(j)), static_cast<Eigen::Index>(t.size(j))) =
        r.segment(static_cast<Eigen::Index>(t.offset(j)), static_cast<Eigen::Index>(t.size(j)));
  }
  const Vector<double> out = s.head(static_cast<Eigen::Index>(t.size(0)));
  return 0.5 * (out - y).squaredNorm();
}

inline Vector<double> layer_gradient_fd(const NetworkParams<double>& p, const Vector<double>& fixed, std::size_t k,
                                        const Vector<double>& y, double h) {
  const auto& t = p.topology();
  const Vector<double> hk = fixed.segment(static_cast<Eigen::Index>(t.offset(k)), static_cast<Eigen::Index>(t.size(k)));
  Vector<double> g(hk.size());
  if (k == 0) return hk - y;
  for (Eigen::Index i = 0; i < hk.size(); ++i) {
    g[i] = central(
        [&](double v) {
          Vector<double> probe = hk;
          probe[i] = v;
          return downstream_cost(p, fixed, k, probe, y);
        },
        hk[i], h);
  }
  return g;
}

}  // namespace oracle
