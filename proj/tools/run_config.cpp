#include "run_config.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <set>

#include "eigenfeat/binary_io.hpp"
#include "eigenfeat/error.hpp"

namespace eigenfeat::cli {

namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  require(j.is_object(), ErrorCode::invalid_argument, "config: '" + where + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    require(ok.count(key) > 0, ErrorCode::invalid_argument, "config: unknown key '" + where + "." + key + "'");
}

template <typename T>
void read(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

}  // namespace

cnn::NetworkConfig RunConfig::network() const {
  cnn::NetworkConfig net = architecture == "full" ? cnn::full_scale_config(train.dropout_rate)
                                                    : cnn::desk_config(train.dropout_rate);
  net.normalize_input = normalize_input;
  net.classes = classes.size();
  for (auto& layer : net.layers)
    if (auto* fc = std::get_if<cnn::FullyConnected>(&layer)) fc->outputs = net.classes;
  net.input.width = net.input.height = architecture == "full" ? net.input.width : image_size;
  if (reduced_capacity) net = cnn::reduced_capacity_config(net);
  return net;
}

cnn::TrainConfig RunConfig::training() const {
  cnn::TrainConfig t = train;
  t.seed = seed;
  t.deterministic = deterministic;
  if (reduced_capacity) t.batch_size = 32;
  return t;
}

void RunConfig::validate() const {
  require(architecture == "desk" || architecture == "full", ErrorCode::invalid_argument,
          "config: architecture must be 'desk' or 'full'");
  require(train_input == "gradient" || train_input == "raw", ErrorCode::invalid_argument,
          "config: train.input must be 'gradient' or 'raw'");
  require(n_per_class >= 1, ErrorCode::invalid_argument, "config: data.n_per_class must be >= 1");
  require(image_size >= 8, ErrorCode::invalid_argument, "config: data.size must be >= 8");
  require(classes.size() >= 2, ErrorCode::invalid_argument, "config: at least two classes are needed");
  for (std::size_t i = 0; i < classes.size(); ++i)
    require(classes[i].label == i + 1, ErrorCode::invalid_argument, "config: class labels must be 1..K in order");
  require(relu >= 1, ErrorCode::invalid_argument, "config: fingerprint.relu must be >= 1");
  cnn::validate(training());
  cnn::validate(network());
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::invalid_argument, std::string("config is not valid JSON: ") + e.what());
  }
  try {
    only_keys(j, "", {"seed", "deterministic", "out", "data", "preprocess", "network", "train", "fingerprint"});
    read(j, "seed", cfg.seed);
    read(j, "deterministic", cfg.deterministic);
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("data")) {
      const json& d = j.at("data");
      only_keys(d, "data", {"n_per_class", "size", "val_fraction", "classes"});
      read(d, "n_per_class", cfg.n_per_class);
      read(d, "size", cfg.image_size);
      read(d, "val_fraction", cfg.data_val_fraction);
      if (d.contains("classes")) {
        cfg.classes.clear();
        for (const json& c : d.at("classes")) {
          only_keys(c, "data.classes[]", {"label", "correlation_length", "amplitude", "base_level"});
          ClassSpec s;
          read(c, "label", s.label);
          read(c, "correlation_length", s.correlation_length);
          read(c, "amplitude", s.amplitude);
          read(c, "base_level", s.base_level);
          cfg.classes.push_back(s);
        }
      }
    }
    if (j.contains("preprocess")) {
      const json& p = j.at("preprocess");
      only_keys(p, "preprocess", {"method"});
      if (p.contains("method")) cfg.method = parse_gradient_method(p.at("method").get<std::string>());
    }
    if (j.contains("network")) {
      const json& n = j.at("network");
      only_keys(n, "network", {"architecture", "reduced_capacity", "normalize_input"});
      read(n, "architecture", cfg.architecture);
      read(n, "reduced_capacity", cfg.reduced_capacity);
      read(n, "normalize_input", cfg.normalize_input);
    }
    if (j.contains("train")) {
      const json& t = j.at("train");
      only_keys(t, "train", {"batch_size", "learning_rate", "epochs", "val_fraction", "val_frequency", "l2_lambda",
                             "dropout_rate", "augment", "input"});
      read(t, "batch_size", cfg.train.batch_size);
      read(t, "learning_rate", cfg.train.learning_rate);
      read(t, "epochs", cfg.train.epochs);
      read(t, "val_fraction", cfg.train.val_fraction);
      read(t, "val_frequency", cfg.train.val_frequency);
      read(t, "l2_lambda", cfg.train.l2_lambda);
      read(t, "dropout_rate", cfg.train.dropout_rate);
      read(t, "augment", cfg.train.augment);
      read(t, "input", cfg.train_input);
    }
    if (j.contains("fingerprint")) {
      const json& f = j.at("fingerprint");
      only_keys(f, "fingerprint", {"relu"});
      read(f, "relu", cfg.relu);
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::invalid_argument, std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(read_file(path)); }

std::string run_config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  j["deterministic"] = cfg.deterministic;
  j["out"] = cfg.out.generic_string();
  auto& d = j["data"];
  d["n_per_class"] = cfg.n_per_class;
  d["size"] = cfg.image_size;
  d["val_fraction"] = cfg.data_val_fraction;
  d["classes"] = nlohmann::ordered_json::array();
  for (const auto& c : cfg.classes)
    d["classes"].push_back({{"label", c.label},
                            {"correlation_length", c.correlation_length},
                            {"amplitude", c.amplitude},
                            {"base_level", c.base_level}});
  j["preprocess"]["method"] = std::string(to_string(cfg.method));
  j["network"] = {{"architecture", cfg.architecture},
                  {"reduced_capacity", cfg.reduced_capacity},
                  {"normalize_input", cfg.normalize_input}};
  const auto& t = cfg.train;
  j["train"] = {{"batch_size", t.batch_size},   {"learning_rate", t.learning_rate}, {"epochs", t.epochs},
                {"val_fraction", t.val_fraction}, {"val_frequency", t.val_frequency}, {"l2_lambda", t.l2_lambda},
                {"dropout_rate", t.dropout_rate}, {"augment", t.augment},           {"input", cfg.train_input}};
  j["fingerprint"]["relu"] = cfg.relu;
  return j.dump(2) + "\n";
}

}  // namespace eigenfeat::cli
