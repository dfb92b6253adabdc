#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>

#include <nlohmann/json.hpp>

#include "energynet/harness/config.hpp"

namespace energynet::harness {

inline constexpr int kParamsFormatVersion = 1;

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::vector<double> to_std(const Vector<double>& v) { return {v.data(), v.data() + v.size()}; }

inline Vector<double> from_std(const std::vector<double>& v) {
  Vector<double> out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidConfig, "out: cannot write " + path.string());
  out << text;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

// ---- parameters -----------------------------------------------------------

inline nlohmann::json params_to_json(const NetworkParams<double>& p) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : p.blocks()) {
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(b.size()));
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      for (Eigen::Index j = 0; j < b.cols(); ++j) data.push_back(b(i, j));
    }
    blocks.push_back({{"rows", b.rows()}, {"cols", b.cols()}, {"data", data}});
  }
  return {{"format_version", kParamsFormatVersion},
          {"layers", p.topology().layer_sizes()},
          {"beta1", p.nonlinearity().beta1()},
          {"beta2", p.nonlinearity().beta2()},
          {"biases", to_std(p.biases())},
          {"blocks", blocks}};
}

inline NetworkParams<double> params_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != kParamsFormatVersion) {
      throw Error(ErrorCode::kParse, "params: unsupported format_version");
    }
    LayeredTopology topo(j.at("layers").get<std::vector<std::size_t>>());
    HardSigmoid<double> nl(j.at("beta1").get<double>(), j.at("beta2").get<double>());
    std::vector<Matrix<double>> blocks;
    for (const auto& jb : j.at("blocks")) {
      const auto rows = jb.at("rows").get<Eigen::Index>();
      const auto cols = jb.at("cols").get<Eigen::Index>();
      const auto data = jb.at("data").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
        throw Error(ErrorCode::kParse, "params: block data length does not match its shape");
      }
      Matrix<double> m(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = data[static_cast<std::size_t>(i * cols + c)];
      }
      blocks.push_back(std::move(m));
    }
    return NetworkParams<double>(std::move(topo), std::move(blocks), from_std(j.at("biases").get<std::vector<double>>()), nl);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("params: ") + e.what());
  }
}

// ---- trajectory -----------------------------------------------------------

/// step,unit,state,corrupted_state,delta,energy; energy repeats on every unit row.
inline std::string trajectory_csv(const TrajectoryLog<double>& log) {
  std::string out = "step,unit,state,corrupted_state,delta,energy\n";
  for (std::size_t t = 0; t < log.steps.size(); ++t) {
    const auto& rec = log.steps[t];
    const std::string e = format_double(rec.energy);
    for (Eigen::Index i = 0; i < rec.state.size(); ++i) {
      out += std::to_string(t) + ',' + std::to_string(i) + ',' + format_double(rec.state[i]) + ',' +
             format_double(rec.corrupted[i]) + ',' + format_double(rec.delta[i]) + ',' + e + '\n';
    }
  }
  return out;
}

// ---- gradient report --------------------------------------------------------

inline nlohmann::json report_to_json(const GradientReport<double>& r, const RunConfig& cfg) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : r.layers) {
    layers.push_back({{"layer", l.layer},
                      {"measured_delta", to_std(l.measured_delta)},
                      {"oracle_gradient", to_std(l.oracle_gradient)},
                      {"predicted_delta", to_std(l.predicted_delta)},
                      {"relative_l2_error", l.relative_l2_error},
                      {"cosine_similarity", l.cosine_similarity},
                      {"epsilon_power_used", l.epsilon_power_used},
                      {"linear_regime", l.linear_regime},
                      {"arrival_step", l.arrival_step}});
  }
  return {{"layers", layers},
          {"cost", r.cost},
          {"settle_steps", r.settle_steps},
          {"settle_residual", r.settle_residual},
          {"linear_regime", r.linear_regime},
          {"kink_contacts", r.kink_contacts},
          {"seed", cfg.seed},
          {"config", cfg}};
}

/// layer,unit,measured_delta,oracle_gradient,predicted_delta
inline std::string report_csv(const GradientReport<double>& r) {
  std::string out = "layer,unit,measured_delta,oracle_gradient,predicted_delta\n";
  for (const auto& l : r.layers) {
    for (Eigen::Index u = 0; u < l.measured_delta.size(); ++u) {
      out += std::to_string(l.layer) + ',' + std::to_string(u) + ',' + format_double(l.measured_delta[u]) + ',' +
             format_double(l.oracle_gradient[u]) + ',' + format_double(l.predicted_delta[u]) + '\n';
    }
  }
  return out;
}

// ---- training -----------------------------------------------------------------

inline std::string metrics_csv(const std::vector<TrainMetrics>& rows) {
  std::string out = "epoch,mse,cosine_stdp_vs_sgd,weight_asymmetry,skipped_examples\n";
  for (const auto& m : rows) {
    out += std::to_string(m.epoch) + ',' + format_double(m.mse) + ',' + format_double(m.cosine_stdp_vs_sgd) + ',' +
           format_double(m.weight_asymmetry) + ',' + std::to_string(m.skipped_examples) + '\n';
  }
  return out;
}

}  // namespace energynet::harness
