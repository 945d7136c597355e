#include "pfs/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <random>
#include <sstream>

#include "binary_io.hpp"
#include "pfs/errors.hpp"
#include "text_scan.hpp"

namespace pfs {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

const char* activation_name(Activation a) { return a == Activation::kRelu ? "relu" : "identity"; }

}  // namespace

MlpModel::MlpModel(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw FormatError("model has no layers");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const DenseLayer& l = layers_[k];
    const std::string where = "layer " + std::to_string(k);
    if (l.rows == 0 || l.cols == 0) throw FormatError(where + " has an empty dimension");
    if (l.weights.size() != l.rows * l.cols || l.biases.size() != l.rows)
      throw FormatError(where + " storage does not match " + std::to_string(l.rows) + "x" +
                        std::to_string(l.cols));
    if (k > 0 && l.cols != layers_[k - 1].rows)
      throw FormatError(where + " expects " + std::to_string(l.cols) + " inputs but layer " +
                        std::to_string(k - 1) + " produces " + std::to_string(layers_[k - 1].rows));
    if (!all_finite(l.weights) || !all_finite(l.biases))
      throw FormatError(where + " contains a non-finite value");
  }
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const DenseLayer& l : layers_) n += l.weights.size() + l.biases.size();
  return n;
}

std::vector<char> model_to_bytes(const MlpModel& model) {
  detail::ByteWriter w;
  w.put_bytes("MLP1");
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.layers().size()));
  for (const DenseLayer& l : model.layers()) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(l.rows));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(l.cols));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(l.activation));
    for (double v : l.weights) w.put<double>(v);
    for (double v : l.biases) w.put<double>(v);
  }
  return w.bytes();
}

MlpModel model_from_bytes(const std::vector<char>& bytes, const std::string& what) {
  detail::ByteReader r(bytes, what);
  r.expect_magic("MLP1");
  const auto count = r.get<std::uint32_t>();
  if (count == 0) r.fail("model has no layers");
  std::vector<DenseLayer> layers;
  for (std::uint32_t k = 0; k < count; ++k) {
    DenseLayer l;
    l.rows = r.get<std::uint32_t>();
    l.cols = r.get<std::uint32_t>();
    const auto tag = r.get<std::uint8_t>();
    if (tag > 1) r.fail("unknown activation tag " + std::to_string(tag));
    l.activation = static_cast<Activation>(tag);
    if (l.rows == 0 || l.cols == 0) r.fail("layer " + std::to_string(k) + " has an empty dimension");
    if (!layers.empty() && l.cols != layers.back().rows)
      r.fail("layer " + std::to_string(k) + " expects " + std::to_string(l.cols) +
             " inputs but the previous layer produces " + std::to_string(layers.back().rows));
    // Check the payload exists before allocating for it.
    if ((l.rows * l.cols + l.rows) > r.remaining() / sizeof(double))
      r.fail("truncated: layer " + std::to_string(k) + " needs " +
             std::to_string((l.rows * l.cols + l.rows) * sizeof(double)) + " bytes, " +
             std::to_string(r.remaining()) + " left");
    l.weights.resize(l.rows * l.cols);
    for (double& v : l.weights) {
      v = r.get<double>();
      if (!std::isfinite(v)) r.fail("non-finite weight in layer " + std::to_string(k));
    }
    l.biases.resize(l.rows);
    for (double& v : l.biases) {
      v = r.get<double>();
      if (!std::isfinite(v)) r.fail("non-finite bias in layer " + std::to_string(k));
    }
    layers.push_back(std::move(l));
  }
  if (r.remaining() != 0) r.fail(std::to_string(r.remaining()) + " trailing bytes");
  return MlpModel(std::move(layers));
}

void save_model(const MlpModel& model, const std::string& path) {
  detail::write_file(path, model_to_bytes(model));
}

MlpModel load_model(const std::string& path) { return model_from_bytes(detail::read_file(path), path); }

MlpModel parse_model_text(std::string_view text) {
  std::string clean(text);
  // Blank out comments in place so token positions stay accurate.
  for (std::size_t i = 0; i < clean.size(); ++i) {
    if (clean[i] != '#') continue;
    while (i < clean.size() && clean[i] != '\n') clean[i++] = ' ';
  }
  auto tokens = detail::tokenize(clean);
  std::size_t pos = 0;
  auto next = [&](const char* expected) -> const detail::Token& {
    if (pos >= tokens.size()) {
      std::size_t line = tokens.empty() ? 1 : tokens.back().line;
      throw ParseError(std::string("unexpected end of input, expected ") + expected, line, 1);
    }
    return tokens[pos++];
  };
  auto number = [&]() {
    const auto& t = next("a number");
    std::string s(t.text);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v))
      throw ParseError("expected a finite number, got '" + s + "'", t.line, t.column);
    return v;
  };
  auto positive = [&](const char* what) {
    const auto& t = next(what);
    int v = detail::to_int(t);
    if (v <= 0) throw ParseError(std::string(what) + " must be positive", t.line, t.column);
    return static_cast<std::size_t>(v);
  };

  const auto& head = next("'mlp1'");
  if (head.text != "mlp1") throw ParseError("expected 'mlp1' header", head.line, head.column);
  const std::size_t count = positive("layer count");
  std::vector<DenseLayer> layers;
  for (std::size_t k = 0; k < count; ++k) {
    const auto& kw = next("'layer'");
    if (kw.text != "layer") throw ParseError("expected 'layer'", kw.line, kw.column);
    DenseLayer l;
    l.rows = positive("rows");
    l.cols = positive("cols");
    const auto& act = next("an activation");
    if (act.text == "relu") {
      l.activation = Activation::kRelu;
    } else if (act.text == "identity") {
      l.activation = Activation::kIdentity;
    } else {
      throw ParseError("activation must be relu or identity", act.line, act.column);
    }
    if (!layers.empty() && l.cols != layers.back().rows)
      throw ParseError("layer expects " + std::to_string(l.cols) + " inputs but the previous layer produces " +
                           std::to_string(layers.back().rows),
                       kw.line, kw.column);
    l.weights.resize(l.rows * l.cols);
    for (double& v : l.weights) v = number();
    l.biases.resize(l.rows);
    for (double& v : l.biases) v = number();
    layers.push_back(std::move(l));
  }
  if (pos != tokens.size())
    throw ParseError("trailing input after the last layer", tokens[pos].line, tokens[pos].column);
  return MlpModel(std::move(layers));
}

std::string format_model_text(const MlpModel& model) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "mlp1 " << model.layers().size() << '\n';
  for (const DenseLayer& l : model.layers()) {
    out << "layer " << l.rows << ' ' << l.cols << ' ' << activation_name(l.activation) << '\n';
    for (std::size_t r = 0; r < l.rows; ++r) {
      for (std::size_t c = 0; c < l.cols; ++c) out << (c ? " " : "") << l.weights[r * l.cols + c];
      out << '\n';
    }
    for (std::size_t r = 0; r < l.rows; ++r) out << (r ? " " : "") << l.biases[r];
    out << '\n';
  }
  return out.str();
}

MlpModel random_model(const std::vector<std::size_t>& dims, std::uint64_t seed, double scale) {
  if (dims.size() < 2) throw std::invalid_argument("need at least input and output dimensions");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<DenseLayer> layers;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    DenseLayer l;
    l.cols = dims[k];
    l.rows = dims[k + 1];
    l.activation = k + 2 < dims.size() ? Activation::kRelu : Activation::kIdentity;
    l.weights.resize(l.rows * l.cols);
    for (double& v : l.weights) v = u(rng);
    l.biases.resize(l.rows);
    for (double& v : l.biases) v = u(rng);
    layers.push_back(std::move(l));
  }
  return MlpModel(std::move(layers));
}

std::vector<double> infer_logits(const MlpModel& model, std::span<const double> input) {
  if (input.size() != model.input_dim())
    throw std::invalid_argument("input has " + std::to_string(input.size()) + " components, model expects " +
                                std::to_string(model.input_dim()));
  std::vector<double> x(input.begin(), input.end());
  std::vector<double> y;
  for (const DenseLayer& l : model.layers()) {
    y.assign(l.rows, 0.0);
    for (std::size_t r = 0; r < l.rows; ++r) {
      const double* w = l.weights.data() + r * l.cols;
      double acc = l.biases[r];
      for (std::size_t c = 0; c < l.cols; ++c) acc += w[c] * x[c];
      if (l.activation == Activation::kRelu && acc < 0.0) acc = 0.0;
      y[r] = acc;
    }
    x.swap(y);
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw CorruptionError("non-finite logit during inference");
  }
  return x;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double top = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

std::vector<double> infer_scores(const MlpModel& model, std::span<const double> input) {
  auto logits = infer_logits(model, input);
  return softmax(logits);
}

std::vector<double> encode_tile_state(const TileState& state) {
  if (state.size != 4) throw std::invalid_argument("one-hot encoding is defined for the 15-puzzle");
  std::vector<double> x(kTileEncodingSize, 0.0);
  for (int c = 0; c < 16; ++c) x[16 * c + state.cells[c]] = 1.0;
  return x;
}

TileState decode_tile_state(std::span<const double> encoding) {
  if (encoding.size() != kTileEncodingSize) throw std::invalid_argument("encoding must have 256 components");
  TileState s;
  s.size = 4;
  unsigned seen = 0;
  for (int c = 0; c < 16; ++c) {
    int tile = -1;
    for (int t = 0; t < 16; ++t) {
      const double v = encoding[16 * c + t];
      if (v == 1.0) {
        if (tile >= 0) throw std::invalid_argument("cell " + std::to_string(c) + " has two tiles");
        tile = t;
      } else if (v != 0.0) {
        throw std::invalid_argument("encoding is not 0/1");
      }
    }
    if (tile < 0) throw std::invalid_argument("cell " + std::to_string(c) + " is empty");
    if (seen & (1u << tile)) throw std::invalid_argument("tile " + std::to_string(tile) + " appears twice");
    seen |= 1u << tile;
    s.cells[c] = static_cast<std::uint8_t>(tile);
    if (tile == 0) s.blank = c;
  }
  return s;
}

NeuralPolicy::NeuralPolicy(std::shared_ptr<const MlpModel> model, const TileDomain& domain)
    : model_(std::move(model)), domain_(domain) {
  if (domain_.size() != 4) throw ConfigError("neural policies run on tile15 only");
  if (model_->input_dim() != kTileEncodingSize || model_->output_dim() != 4)
    throw ConfigError("tile15 models must map 256 inputs to 4 outputs, got " +
                      std::to_string(model_->input_dim()) + " -> " + std::to_string(model_->output_dim()));
}

void NeuralPolicy::scores(StateKey state, std::span<double> out) const {
  auto y = infer_scores(*model_, encode_tile_state(domain_.unpack(state)));
  std::copy(y.begin(), y.end(), out.begin());
}

}  // namespace pfs
