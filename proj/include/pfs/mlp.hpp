#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfs/policy.hpp"
#include "pfs/tile.hpp"

namespace pfs {

enum class Activation : std::uint8_t { kIdentity = 0, kRelu = 1 };

/// y = act(W x + b) with W stored row-major, rows = outputs.
struct DenseLayer {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Activation activation = Activation::kIdentity;
  std::vector<double> weights;
  std::vector<double> biases;
};

/// Feedforward network whose last layer produces logits; scores are their softmax.
class MlpModel {
 public:
  /// Throws FormatError if the layer dimensions do not chain or a value is not finite.
  explicit MlpModel(std::vector<DenseLayer> layers);

  std::size_t input_dim() const { return layers_.front().cols; }
  std::size_t output_dim() const { return layers_.back().rows; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::size_t parameter_count() const;

 private:
  std::vector<DenseLayer> layers_;
};

/// "MLP1" container: u32 layer count, then per layer u32 rows, u32 cols,
/// u8 activation, rows*cols f64 weights, rows f64 biases.
std::vector<char> model_to_bytes(const MlpModel& model);
MlpModel model_from_bytes(const std::vector<char>& bytes, const std::string& what = "model");
void save_model(const MlpModel& model, const std::string& path);
MlpModel load_model(const std::string& path);

/// Plain-text layer dump, see models/README.md.
MlpModel parse_model_text(std::string_view text);
std::string format_model_text(const MlpModel& model);

/// Hidden layers ReLU, output identity; weights uniform in [-scale, scale].
MlpModel random_model(const std::vector<std::size_t>& dims, std::uint64_t seed, double scale = 0.5);

std::vector<double> infer_logits(const MlpModel& model, std::span<const double> input);
/// Softmax of the logits with the maximum subtracted first.
std::vector<double> softmax(std::span<const double> logits);
std::vector<double> infer_scores(const MlpModel& model, std::span<const double> input);

inline constexpr std::size_t kTileEncodingSize = 256;

/// One-hot, cell-major: tile t at cell c sets component 16*c + t. 15-puzzle only.
std::vector<double> encode_tile_state(const TileState& state);
TileState decode_tile_state(std::span<const double> encoding);

/// pi(a, s) = softmax(f(encode(s)))_a on the 15-puzzle.
class NeuralPolicy final : public StochasticPolicy {
 public:
  NeuralPolicy(std::shared_ptr<const MlpModel> model, const TileDomain& domain);

  int action_count() const override { return 4; }
  void scores(StateKey state, std::span<double> out) const override;
  using StochasticPolicy::scores;

 private:
  std::shared_ptr<const MlpModel> model_;
  const TileDomain& domain_;
};

}  // namespace pfs
