#include "eigenfeat/cnn/config.hpp"

#include <cstdio>
#include <sstream>

#include "eigenfeat/error.hpp"

namespace eigenfeat::cnn {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::size_t output_size(std::size_t in, std::size_t kernel, std::size_t pad, std::size_t stride) {
  require(stride >= 1, ErrorCode::invalid_geometry, "stride must be >= 1");
  const long numerator = static_cast<long>(in) - static_cast<long>(kernel) + 2 * static_cast<long>(pad);
  require(numerator >= 0, ErrorCode::invalid_geometry,
          "window " + std::to_string(kernel) + " exceeds padded input " + std::to_string(in + 2 * pad));
  require(numerator % static_cast<long>(stride) == 0, ErrorCode::invalid_geometry,
          "(in - kernel + 2 pad) not divisible by stride");
  return static_cast<std::size_t>(numerator) / stride + 1;
}

std::size_t pooled_size(std::size_t in, std::size_t size, std::size_t stride) {
  require(size >= 1 && stride >= 1, ErrorCode::invalid_geometry, "pool size and stride must be >= 1");
  require(in >= size, ErrorCode::invalid_geometry,
          "pool window " + std::to_string(size) + " exceeds input " + std::to_string(in));
  return (in - size) / stride + 1;
}

Volume layer_output(const LayerSpec& layer, const Volume& in) {
  return std::visit(
      overloaded{
          [&](const Conv& c) {
            return Volume{c.filters, output_size(in.height, c.kernel, c.pad, c.stride),
                          output_size(in.width, c.kernel, c.pad, c.stride)};
          },
          [&](const MaxPool& p) {
            return Volume{in.channels, pooled_size(in.height, p.size, p.stride),
                          pooled_size(in.width, p.size, p.stride)};
          },
          [&](const FullyConnected& f) { return Volume{f.outputs, 1, 1}; },
          [&](const Softmax&) { return Volume{in.size(), 1, 1}; },
          [&](const auto&) { return in; },
      },
      layer);
}

std::vector<Volume> trace_geometry(const NetworkConfig& config) {
  std::vector<Volume> out;
  out.reserve(config.layers.size());
  Volume v = config.input;
  for (const auto& layer : config.layers) {
    v = layer_output(layer, v);
    out.push_back(v);
  }
  return out;
}

std::string layer_name(const LayerSpec& layer) {
  return std::visit(overloaded{
                        [](const Conv&) { return std::string("conv"); },
                        [](const BatchNorm&) { return std::string("batchnorm"); },
                        [](const ReLU&) { return std::string("relu"); },
                        [](const MaxPool&) { return std::string("maxpool"); },
                        [](const FullyConnected&) { return std::string("fc"); },
                        [](const Dropout&) { return std::string("dropout"); },
                        [](const Softmax&) { return std::string("softmax"); },
                    },
                    layer);
}

bool is_relu(const LayerSpec& layer) { return std::holds_alternative<ReLU>(layer); }
bool is_conv(const LayerSpec& layer) { return std::holds_alternative<Conv>(layer); }

namespace {

void validate_layer(const LayerSpec& layer) {
  std::visit(overloaded{
                 [](const Conv& c) {
                   require(c.kernel >= 1 && c.kernel % 2 == 1, ErrorCode::invalid_geometry,
                           "conv kernel must be odd and >= 1");
                   require(c.stride >= 1, ErrorCode::invalid_geometry, "conv stride must be >= 1");
                   require(c.filters >= 1, ErrorCode::invalid_geometry, "conv needs at least one filter");
                 },
                 [](const BatchNorm& b) {
                   require(b.epsilon > 0.0, ErrorCode::invalid_argument, "batchnorm epsilon must be > 0");
                 },
                 [](const MaxPool& p) {
                   require(p.size >= 1 && p.stride >= 1, ErrorCode::invalid_geometry,
                           "pool size and stride must be >= 1");
                 },
                 [](const FullyConnected& f) {
                   require(f.outputs >= 1, ErrorCode::invalid_geometry, "fc needs at least one output");
                 },
                 [](const Dropout& d) {
                   require(d.rate >= 0.0 && d.rate < 1.0, ErrorCode::invalid_argument,
                           "dropout rate must be in [0, 1)");
                 },
                 [](const auto&) {},
             },
             layer);
}

}  // namespace

void validate(const NetworkConfig& config) {
  require(config.classes >= 1, ErrorCode::invalid_argument, "classes must be >= 1");
  require(config.input.channels >= 1 && config.input.height >= 1 && config.input.width >= 1,
          ErrorCode::invalid_geometry, "input volume must be non-empty");
  for (const auto& layer : config.layers) validate_layer(layer);

  const auto& L = config.layers;
  std::size_t i = 0;
  while (i < L.size() && is_conv(L[i])) {
    require(i + 2 < L.size() && std::holds_alternative<BatchNorm>(L[i + 1]) && is_relu(L[i + 2]),
            ErrorCode::invalid_argument, "every conv must be followed by batchnorm then relu");
    i += 3;
    if (i < L.size() && std::holds_alternative<MaxPool>(L[i])) ++i;
  }
  if (i < L.size() && std::holds_alternative<Dropout>(L[i])) ++i;
  require(i + 2 == L.size(), ErrorCode::invalid_argument,
          "network must end with [dropout,] fc, softmax after its conv blocks");
  const auto* fc = std::get_if<FullyConnected>(&L[i]);
  require(fc != nullptr && fc->outputs == config.classes, ErrorCode::invalid_argument,
          "penultimate layer must be fc with one output per class");
  require(std::holds_alternative<Softmax>(L[i + 1]), ErrorCode::invalid_argument, "last layer must be softmax");

  (void)trace_geometry(config);
}

void validate(const TrainConfig& config) {
  require(config.batch_size >= 1, ErrorCode::invalid_argument, "batch_size must be >= 1");
  require(config.learning_rate > 0.0, ErrorCode::invalid_argument, "learning_rate must be > 0");
  require(config.val_fraction > 0.0 && config.val_fraction < 1.0, ErrorCode::invalid_argument,
          "val_fraction must be in (0, 1)");
  require(config.val_frequency >= 1, ErrorCode::invalid_argument, "val_frequency must be >= 1");
  require(config.l2_lambda >= 0.0, ErrorCode::invalid_argument, "l2_lambda must be >= 0");
  require(config.dropout_rate >= 0.0 && config.dropout_rate < 1.0, ErrorCode::invalid_argument,
          "dropout_rate must be in [0, 1)");
}

std::size_t relu_layer(const NetworkConfig& config, std::size_t k) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < config.layers.size(); ++i)
    if (is_relu(config.layers[i]) && ++seen == k) return i;
  fail(ErrorCode::invalid_argument, "network has fewer than " + std::to_string(k) + " relu layers");
}

namespace {

NetworkConfig blocks_config(Volume input, const std::vector<std::pair<std::size_t, std::size_t>>& blocks,
                            double dropout_rate) {
  NetworkConfig cfg;
  cfg.input = input;
  for (const auto& [kernel, filters] : blocks) {
    cfg.layers.emplace_back(Conv{kernel, filters, 1, 1});
    cfg.layers.emplace_back(BatchNorm{});
    cfg.layers.emplace_back(ReLU{});
    cfg.layers.emplace_back(MaxPool{2, 2});
  }
  cfg.layers.emplace_back(Dropout{dropout_rate});
  cfg.layers.emplace_back(FullyConnected{cfg.classes});
  cfg.layers.emplace_back(Softmax{});
  return cfg;
}

}  // namespace

NetworkConfig full_scale_config(double dropout_rate) {
  return blocks_config({1, 266, 266}, {{3, 128}, {5, 128}, {7, 64}, {9, 64}, {11, 64}}, dropout_rate);
}

NetworkConfig desk_config(double dropout_rate) {
  return blocks_config({1, 64, 64}, {{3, 32}, {5, 32}, {7, 16}}, dropout_rate);
}

NetworkConfig reduced_capacity_config(const NetworkConfig& config) {
  std::vector<std::size_t> convs;
  for (std::size_t i = 0; i < config.layers.size(); ++i)
    if (is_conv(config.layers[i])) convs.push_back(i);
  require(convs.size() >= 2, ErrorCode::precondition, "reduced capacity needs at least two conv blocks");

  NetworkConfig out = config;
  for (std::size_t k = 0; k < 2; ++k) {
    auto& conv = std::get<Conv>(out.layers[convs[k]]);
    require(conv.filters % 2 == 0, ErrorCode::precondition,
            "conv layer " + std::to_string(k + 1) + " has an odd filter count (" + std::to_string(conv.filters) +
                ")");
    conv.filters /= 2;
  }
  // last block: conv, batchnorm, relu and an optional maxpool
  const std::size_t first = convs.back();
  std::size_t last = first + 3;
  if (last < out.layers.size() && std::holds_alternative<MaxPool>(out.layers[last])) ++last;
  out.layers.erase(out.layers.begin() + static_cast<std::ptrdiff_t>(first),
                   out.layers.begin() + static_cast<std::ptrdiff_t>(last));
  validate(out);
  return out;
}

std::string to_canonical_text(const NetworkConfig& config) {
  std::ostringstream out;
  out << "network 1\n";
  out << "input " << config.input.channels << ' ' << config.input.height << ' ' << config.input.width << '\n';
  out << "classes " << config.classes << '\n';
  out << "normalize_input " << (config.normalize_input ? 1 : 0) << '\n';
  for (const auto& layer : config.layers) {
    out << "layer " << layer_name(layer);
    std::visit(overloaded{
                   [&](const Conv& c) { out << ' ' << c.kernel << ' ' << c.filters << ' ' << c.pad << ' ' << c.stride; },
                   [&](const BatchNorm& b) { out << ' ' << fmt_double(b.epsilon); },
                   [&](const MaxPool& p) { out << ' ' << p.size << ' ' << p.stride; },
                   [&](const FullyConnected& f) { out << ' ' << f.outputs; },
                   [&](const Dropout& d) { out << ' ' << fmt_double(d.rate); },
                   [&](const auto&) {},
               },
               layer);
    out << '\n';
  }
  return out.str();
}

NetworkConfig parse_canonical_text(const std::string& text) {
  std::istringstream in(text);
  NetworkConfig cfg;
  cfg.layers.clear();
  std::string line;
  bool saw_header = false;
  auto bad = [](const std::string& what) { fail(ErrorCode::corrupt_payload, "network text: " + what); };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "network") {
      int version = 0;
      ls >> version;
      if (version != 1) bad("unsupported network text version");
      saw_header = true;
    } else if (key == "input") {
      ls >> cfg.input.channels >> cfg.input.height >> cfg.input.width;
    } else if (key == "classes") {
      ls >> cfg.classes;
    } else if (key == "normalize_input") {
      int flag = 0;
      ls >> flag;
      cfg.normalize_input = flag != 0;
    } else if (key == "layer") {
      std::string kind;
      ls >> kind;
      if (kind == "conv") {
        Conv c;
        ls >> c.kernel >> c.filters >> c.pad >> c.stride;
        cfg.layers.emplace_back(c);
      } else if (kind == "batchnorm") {
        BatchNorm b;
        ls >> b.epsilon;
        cfg.layers.emplace_back(b);
      } else if (kind == "relu") {
        cfg.layers.emplace_back(ReLU{});
      } else if (kind == "maxpool") {
        MaxPool p;
        ls >> p.size >> p.stride;
        cfg.layers.emplace_back(p);
      } else if (kind == "fc") {
        FullyConnected f;
        ls >> f.outputs;
        cfg.layers.emplace_back(f);
      } else if (kind == "dropout") {
        Dropout d;
        ls >> d.rate;
        cfg.layers.emplace_back(d);
      } else if (kind == "softmax") {
        cfg.layers.emplace_back(Softmax{});
      } else {
        bad("unknown layer '" + kind + "'");
      }
    } else {
      bad("unknown key '" + key + "'");
    }
    if (ls.fail()) bad("unreadable line '" + line + "'");
  }
  if (!saw_header) bad("missing header");
  return cfg;
}

}  // namespace eigenfeat::cnn
