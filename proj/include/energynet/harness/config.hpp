#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "energynet/learning.hpp"

namespace energynet::harness {

/// Fully resolved settings for one CLI invocation. Defaults < config file < flags.
struct RunConfig {
  std::vector<std::size_t> layers{2, 4, 4, 3};
  double beta1 = -0.5;
  double beta2 = 0.5;
  double epsilon = 0.05;
  double sigma = 0.0;
  double tolerance = 1e-10;
  long max_steps = 100000;
  int nudge_steps = 3;
  int epochs = 200;
  std::uint64_t seed = 42;

  std::string mode = "one_shot";  // one_shot | free_run
  int num_layers_to_check = 3;
  double kink_margin = 1e-3;

  double base_rate = 0.1;
  bool per_layer_rescale = true;
  bool symmetrize_updates = true;
  bool update_biases = false;

  std::string dataset = "random_teacher";  // xor | random_teacher | identity
  std::size_t dataset_size = 64;
  std::string init = "random";  // random | zeros
  double init_gain = kDefaultInitGain;
  std::string params_file;  // overrides init when set
  long sample_steps = 1000;
  std::vector<double> x;  // clamped input for relax/sample/nudge; empty = seeded random
  std::vector<double> y;  // nudge target; empty = seeded random
  bool target_free_output = false;

  std::string out_dir = "out";
  int jobs = 1;
  std::string filter;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  LayeredTopology topology() const { return LayeredTopology(layers); }
  HardSigmoid<double> nonlinearity() const { return HardSigmoid<double>(beta1, beta2); }

  DynamicsConfig dynamics() const { return {epsilon, sigma, tolerance, max_steps, seed}; }

  NudgeExperimentConfig nudge() const {
    return {epsilon, mode == "free_run" ? NudgeMode::kFreeRun : NudgeMode::kOneShotProbe, num_layers_to_check,
            kink_margin};
  }

  LearningConfig learning() const {
    LearningConfig c;
    c.base_rate = base_rate;
    c.per_layer_rescale = per_layer_rescale;
    c.nudge_steps = nudge_steps;
    c.symmetrize_updates = symmetrize_updates;
    c.update_biases = update_biases;
    c.epochs = epochs;
    c.epsilon = epsilon;
    c.sigma = sigma;
    c.tolerance = tolerance;
    c.max_steps = max_steps;
    c.seed = seed;
    return c;
  }

  /// Throws Error(kInvalidConfig) naming the first offending field.
  void validate() const {
    topology();
    nonlinearity();
    dynamics().validate();
    nudge().validate();
    learning().validate();
    if (mode != "one_shot" && mode != "free_run") {
      throw Error(ErrorCode::kInvalidConfig, "mode: expected one_shot or free_run, got '" + mode + "'");
    }
    parse_dataset_kind(dataset);
    if (init != "random" && init != "zeros") {
      throw Error(ErrorCode::kInvalidConfig, "init: expected random or zeros, got '" + init + "'");
    }
    if (!(init_gain > 0.0)) throw Error(ErrorCode::kInvalidConfig, "init_gain: must be > 0");
    if (sample_steps < 1) throw Error(ErrorCode::kInvalidConfig, "sample_steps: must be >= 1");
    if (dataset_size < 1) throw Error(ErrorCode::kInvalidConfig, "dataset_size: must be >= 1");
    if (jobs < 1) throw Error(ErrorCode::kInvalidConfig, "jobs: must be >= 1");
    if (!x.empty() && x.size() != layers.back()) {
      throw Error(ErrorCode::kInvalidConfig, "x: length must equal the input layer size");
    }
    if (!y.empty() && y.size() != layers.front()) {
      throw Error(ErrorCode::kInvalidConfig, "y: length must equal the output layer size");
    }
  }
};

inline void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"layers", c.layers},
                     {"beta1", c.beta1},
                     {"beta2", c.beta2},
                     {"epsilon", c.epsilon},
                     {"sigma", c.sigma},
                     {"tolerance", c.tolerance},
                     {"max_steps", c.max_steps},
                     {"nudge_steps", c.nudge_steps},
                     {"epochs", c.epochs},
                     {"seed", c.seed},
                     {"mode", c.mode},
                     {"num_layers_to_check", c.num_layers_to_check},
                     {"kink_margin", c.kink_margin},
                     {"base_rate", c.base_rate},
                     {"per_layer_rescale", c.per_layer_rescale},
                     {"symmetrize_updates", c.symmetrize_updates},
                     {"update_biases", c.update_biases},
                     {"dataset", c.dataset},
                     {"dataset_size", c.dataset_size},
                     {"init", c.init},
                     {"init_gain", c.init_gain},
                     {"params_file", c.params_file},
                     {"sample_steps", c.sample_steps},
                     {"x", c.x},
                     {"y", c.y},
                     {"target_free_output", c.target_free_output},
                     {"out_dir", c.out_dir},
                     {"jobs", c.jobs},
                     {"filter", c.filter}};
}

namespace detail {

template <typename T>
void read_field(const nlohmann::json& j, const char* name, T& field) {
  if (!j.contains(name)) return;
  try {
    j.at(name).get_to(field);
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kInvalidConfig, std::string(name) + ": wrong type");
  }
}

}  // namespace detail

/// Overlays the fields present in `j` onto `c`. Unknown keys are rejected.
inline void merge_json(const nlohmann::json& j, RunConfig& c) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "config: top level must be an object");
  const nlohmann::json known = c;
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw Error(ErrorCode::kInvalidConfig, key + ": unknown field");
  }
  if (j.contains("layers")) {
    const auto& l = j.at("layers");
    if (!l.is_array()) throw Error(ErrorCode::kInvalidConfig, "layers: must be an array");
    for (const auto& v : l) {
      if (!v.is_number_integer() || v.get<long long>() <= 0) {
        throw Error(ErrorCode::kInvalidConfig, "layers: entries must be positive integers");
      }
    }
  }
  detail::read_field(j, "layers", c.layers);
  detail::read_field(j, "beta1", c.beta1);
  detail::read_field(j, "beta2", c.beta2);
  detail::read_field(j, "epsilon", c.epsilon);
  detail::read_field(j, "sigma", c.sigma);
  detail::read_field(j, "tolerance", c.tolerance);
  detail::read_field(j, "max_steps", c.max_steps);
  detail::read_field(j, "nudge_steps", c.nudge_steps);
  detail::read_field(j, "epochs", c.epochs);
  detail::read_field(j, "seed", c.seed);
  detail::read_field(j, "mode", c.mode);
  detail::read_field(j, "num_layers_to_check", c.num_layers_to_check);
  detail::read_field(j, "kink_margin", c.kink_margin);
  detail::read_field(j, "base_rate", c.base_rate);
  detail::read_field(j, "per_layer_rescale", c.per_layer_rescale);
  detail::read_field(j, "symmetrize_updates", c.symmetrize_updates);
  detail::read_field(j, "update_biases", c.update_biases);
  detail::read_field(j, "dataset", c.dataset);
  detail::read_field(j, "dataset_size", c.dataset_size);
  detail::read_field(j, "init", c.init);
  detail::read_field(j, "init_gain", c.init_gain);
  detail::read_field(j, "params_file", c.params_file);
  detail::read_field(j, "sample_steps", c.sample_steps);
  detail::read_field(j, "x", c.x);
  detail::read_field(j, "y", c.y);
  detail::read_field(j, "target_free_output", c.target_free_output);
  detail::read_field(j, "out_dir", c.out_dir);
  detail::read_field(j, "jobs", c.jobs);
  detail::read_field(j, "filter", c.filter);
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "config: cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kInvalidConfig, "config: " + path.string() + " is not valid JSON (" + e.what() + ")");
  }
}

/// "2,4,4,3" -> {2,4,4,3}.
inline std::vector<std::size_t> parse_layers(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidConfig, "layers: '" + item + "' is not an integer");
    }
    if (pos != item.size() || v <= 0) throw Error(ErrorCode::kInvalidConfig, "layers: '" + item + "' is not a positive integer");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

/// Command-line overrides; unset members leave the file/default value alone.
struct FlagOverrides {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  std::optional<double> sigma;
  std::optional<std::string> layers;
  std::optional<std::string> out_dir;
  std::optional<int> jobs;
  std::optional<std::string> filter;
  std::optional<int> epochs;
  std::optional<std::string> dataset;
  std::optional<std::string> mode;
};

/// Builds the resolved config. When the dataset is xor and no layer list
/// was given anywhere, the default hidden layers get xor's 1-output/2-input
/// endpoints.
inline RunConfig resolve_config(const FlagOverrides& flags) {
  RunConfig c;
  nlohmann::json file;
  if (flags.config_path) {
    file = read_json_file(*flags.config_path);
    merge_json(file, c);
  }
  if (flags.seed) c.seed = *flags.seed;
  if (flags.epsilon) c.epsilon = *flags.epsilon;
  if (flags.sigma) c.sigma = *flags.sigma;
  if (flags.layers) c.layers = parse_layers(*flags.layers);
  if (flags.out_dir) c.out_dir = *flags.out_dir;
  if (flags.jobs) c.jobs = *flags.jobs;
  if (flags.filter) c.filter = *flags.filter;
  if (flags.epochs) c.epochs = *flags.epochs;
  if (flags.dataset) c.dataset = *flags.dataset;
  if (flags.mode) c.mode = *flags.mode;
  const bool layers_given = flags.layers.has_value() || file.contains("layers");
  if (c.dataset == "xor" && !layers_given) c.layers = {1, 4, 4, 2};
  c.validate();
  return c;
}

}  // namespace energynet::harness
