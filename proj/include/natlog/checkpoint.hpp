#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "natlog/models.hpp"
#include "natlog/train.hpp"

namespace natlog {

inline constexpr int kCheckpointVersion = 1;

namespace detail {

inline nlohmann::json params_to_json(ModelParams& params) {
  nlohmann::json out = nlohmann::json::object();
  for (const ParamView& v : params.views()) {
    nlohmann::json values = nlohmann::json::array();
    for (std::ptrdiff_t i = 0; i < v.size; ++i) values.push_back(v.data[i]);
    out[v.name] = std::move(values);
  }
  return out;
}

inline void params_from_json(const nlohmann::json& j, ModelParams& params) {
  for (const ParamView& v : params.views()) {
    const auto& values = j.at(v.name);
    if (static_cast<std::ptrdiff_t>(values.size()) != v.size)
      throw std::runtime_error("checkpoint parameter size mismatch: " + v.name);
    for (std::ptrdiff_t i = 0; i < v.size; ++i)
      v.data[i] = values[static_cast<std::size_t>(i)].get<double>();
  }
}

inline nlohmann::json config_to_json(const ModelConfig& cfg) {
  return {
      {"architecture", to_string(cfg.architecture)},
      {"comparison", to_string(cfg.comparison)},
      {"embedding_dim", cfg.embedding_dim},
      {"feature_dim", cfg.feature_dim},
      {"num_labels", cfg.num_labels},
      {"l2_lambda", cfg.l2_lambda},
      {"l2_on_embeddings", cfg.l2_on_embeddings},
      {"use_embedding_transform", cfg.use_embedding_transform},
      {"comparison_dropout", cfg.comparison_dropout},
      {"transform_dropout", cfg.transform_dropout},
      {"vocabulary", cfg.vocabulary},
  };
}

inline ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig cfg;
  cfg.architecture = architecture_from_string(j.at("architecture").get<std::string>());
  cfg.comparison = comparison_from_string(j.at("comparison").get<std::string>());
  cfg.embedding_dim = j.at("embedding_dim").get<int>();
  cfg.feature_dim = j.at("feature_dim").get<int>();
  cfg.num_labels = j.at("num_labels").get<int>();
  cfg.l2_lambda = j.at("l2_lambda").get<double>();
  cfg.l2_on_embeddings = j.at("l2_on_embeddings").get<bool>();
  cfg.use_embedding_transform = j.at("use_embedding_transform").get<bool>();
  cfg.comparison_dropout = j.at("comparison_dropout").get<double>();
  cfg.transform_dropout = j.at("transform_dropout").get<double>();
  cfg.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
  return cfg;
}

}  // namespace detail

// Versioned JSON checkpoint with shapes implied by the config, parameter
// values, optimizer accumulators and the seed that produced the run. JSON
// doubles round-trip exactly, so load(save(m)) == m bitwise.
inline void save_checkpoint(const std::filesystem::path& path, PairModel& model,
                            AdaDeltaOptimizer* optimizer, std::uint64_t seed) {
  nlohmann::json j = {
      {"format", "natlog-checkpoint"},
      {"version", kCheckpointVersion},
      {"seed", seed},
      {"config", detail::config_to_json(model.config)},
      {"params", detail::params_to_json(model.params)},
  };
  if (optimizer) {
    j["optimizer"] = {
        {"rho", optimizer->hyper().rho},
        {"epsilon", optimizer->hyper().epsilon},
        {"grad_sq", detail::params_to_json(optimizer->grad_sq())},
        {"update_sq", detail::params_to_json(optimizer->update_sq())},
    };
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump() << '\n';
}

struct LoadedCheckpoint {
  PairModel model;
  std::optional<AdaDeltaOptimizer> optimizer;
  std::uint64_t seed = 0;
};

inline LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
  const nlohmann::json j = nlohmann::json::parse(in);
  if (j.at("format").get<std::string>() != "natlog-checkpoint")
    throw std::runtime_error("not a checkpoint file: " + path.string());
  if (j.at("version").get<int>() != kCheckpointVersion)
    throw std::runtime_error("unsupported checkpoint version");
  LoadedCheckpoint loaded;
  loaded.seed = j.at("seed").get<std::uint64_t>();
  loaded.model.config = detail::config_from_json(j.at("config"));
  loaded.model.params = ModelParams::zeros(loaded.model.config);
  detail::params_from_json(j.at("params"), loaded.model.params);
  for (std::size_t i = 0; i < loaded.model.config.vocabulary.size(); ++i)
    loaded.model.token_index.emplace(loaded.model.config.vocabulary[i],
                                     static_cast<int>(i));
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    AdaDeltaHyper hyper{o.at("rho").get<double>(), o.at("epsilon").get<double>()};
    loaded.optimizer.emplace(loaded.model.config, hyper);
    detail::params_from_json(o.at("grad_sq"), loaded.optimizer->grad_sq());
    detail::params_from_json(o.at("update_sq"), loaded.optimizer->update_sq());
  }
  return loaded;
}

}  // namespace natlog
