#include "mediabias/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mediabias/error.hpp"

namespace mediabias {
namespace {

using nlohmann::ordered_json;

template <typename Tensor>
ordered_json tensor_to_json(const Tensor& t) {
  ordered_json j;
  j["rows"] = t.rows();
  j["cols"] = t.cols();
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(t.size()));
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    for (Eigen::Index c = 0; c < t.cols(); ++c) data.push_back(t(r, c));
  }
  j["data"] = std::move(data);
  return j;
}

template <typename Tensor>
void tensor_from_json(const nlohmann::json& j, Tensor& t) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size()) {
    throw DimensionError("checkpoint tensor data does not match its shape");
  }
  if constexpr (Tensor::ColsAtCompileTime == 1) {
    if (cols != 1) throw DimensionError("checkpoint bias must be a column");
    t.resize(rows);
  } else {
    t.resize(rows, cols);
  }
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) t(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  }
}

}  // namespace

std::string checkpoint_to_json(const Checkpoint& cp) {
  ordered_json j;
  j["format"] = "mediabias-mlp";
  j["version"] = kCheckpointVersion;
  j["input_dim"] = cp.params.input_dim();
  auto groups = ordered_json::array();
  for (auto g : cp.groups) groups.push_back(std::string(to_string(g)));
  j["groups"] = std::move(groups);
  j["level"] = std::string(to_string(cp.level));
  j["train"] = {{"epochs", cp.config.epochs},
                {"batch_size", cp.config.batch_size},
                {"dropout_rate", cp.config.dropout_rate},
                {"learning_rate", cp.config.learning_rate},
                {"adagrad_epsilon", cp.config.adagrad_epsilon},
                {"seed", cp.config.seed}};
  j["normalizer"] = {{"mean", std::vector<double>(cp.normalizer.mean().begin(),
                                                  cp.normalizer.mean().end())},
                     {"std", std::vector<double>(cp.normalizer.stddev().begin(),
                                                 cp.normalizer.stddev().end())}};
  ordered_json params;
  params["w1"] = tensor_to_json(cp.params.w1);
  params["b1"] = tensor_to_json(cp.params.b1);
  params["w2"] = tensor_to_json(cp.params.w2);
  params["b2"] = tensor_to_json(cp.params.b2);
  params["w3"] = tensor_to_json(cp.params.w3);
  params["b3"] = tensor_to_json(cp.params.b3);
  j["params"] = std::move(params);
  return j.dump() + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
  Checkpoint cp;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != "mediabias-mlp") {
      throw ParseError(1, "not a mediabias checkpoint");
    }
    const auto version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw ParseError(1, "unsupported checkpoint version " + std::to_string(version));
    }
    std::vector<FeatureGroup> groups;
    for (const auto& name : j.at("groups")) {
      const auto g = parse_feature_group(name.get<std::string>());
      if (!g) throw ParseError(1, "unknown feature group in checkpoint");
      groups.push_back(*g);
    }
    cp.groups = std::move(groups);
    const auto level = parse_level(j.at("level").get<std::string>());
    if (!level) throw ParseError(1, "unknown level in checkpoint");
    cp.level = *level;

    const auto& t = j.at("train");
    cp.config.epochs = t.at("epochs").get<int>();
    cp.config.batch_size = t.at("batch_size").get<int>();
    cp.config.dropout_rate = t.at("dropout_rate").get<double>();
    cp.config.learning_rate = t.at("learning_rate").get<double>();
    cp.config.adagrad_epsilon = t.at("adagrad_epsilon").get<double>();
    cp.config.seed = t.at("seed").get<std::uint64_t>();

    cp.normalizer = Normalizer::from_parameters(j.at("normalizer").at("mean").get<std::vector<double>>(),
                                                j.at("normalizer").at("std").get<std::vector<double>>());
    const auto& p = j.at("params");
    tensor_from_json(p.at("w1"), cp.params.w1);
    tensor_from_json(p.at("b1"), cp.params.b1);
    tensor_from_json(p.at("w2"), cp.params.w2);
    tensor_from_json(p.at("b2"), cp.params.b2);
    tensor_from_json(p.at("w3"), cp.params.w3);
    tensor_from_json(p.at("b3"), cp.params.b3);
    if (j.at("input_dim").get<Eigen::Index>() != cp.params.input_dim()) {
      throw DimensionError("checkpoint input_dim disagrees with w1");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, std::string("malformed checkpoint: ") + e.what());
  }
  if (!cp.params.has_valid_shapes()) throw DimensionError("checkpoint layer shapes are invalid");
  if (!cp.params.all_finite()) throw DimensionError("checkpoint holds non-finite weights");
  if (static_cast<Eigen::Index>(total_dim(cp.groups)) != cp.params.input_dim() ||
      static_cast<Eigen::Index>(cp.normalizer.dim()) != cp.params.input_dim()) {
    throw DimensionError("checkpoint groups, normalizer and network disagree on input size");
  }
  return cp;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write '" + file.string() + "'");
  out << checkpoint_to_json(checkpoint);
}

Checkpoint load_checkpoint(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open '" + file.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return checkpoint_from_json(buffer.str());
}

}  // namespace mediabias
