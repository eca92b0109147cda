#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bvpkit/nn/layers.hpp"

namespace bvpkit::nn {

enum class Variant { Raw1D, Gaf2D };

std::string to_string(Variant v);

/// One conv -> ReLU -> (optional maxpool) block.
struct ConvStage {
    std::size_t filters = 16;
    std::size_t kernel = 3;
    std::size_t pool = 0;  ///< 0 = no pooling
};

struct ModelConfig {
    Variant variant = Variant::Raw1D;
    std::vector<ConvStage> stages;
    std::vector<std::size_t> dense_widths;  ///< hidden dense layers after pooling
    std::size_t num_classes = 4;
    std::uint64_t seed = 0;

    /// conv(32,k8) -> pool4 -> conv(64,k8) -> global avg pool -> dense 4
    static ModelConfig raw1d_default(std::uint64_t seed);
    /// conv(16,3x3) -> pool2 -> conv(32,3x3) -> pool2 -> gap -> dense 4
    static ModelConfig gaf2d_default(std::uint64_t seed);
};

/// Sequential CNN over (B, 1, L) or (B, 1, S, S) batches. Weights are
/// He-uniform initialized from the config seed, so construction is
/// deterministic.
class Model {
public:
    /// `input_extents` is {L} for Raw1D, {S, S} for Gaf2D; layer shapes
    /// are validated against it at build time.
    Model(const ModelConfig& config, const std::vector<std::size_t>& input_extents);

    Tensor forward(const Tensor& batch);
    /// Backpropagates d(loss)/d(logits), accumulating parameter grads.
    Tensor backward(const Tensor& grad_logits);
    void zero_grad();

    std::vector<Param*> params();
    const ModelConfig& config() const { return config_; }
    const std::vector<std::size_t>& input_extents() const { return input_extents_; }
    std::vector<std::size_t> batch_shape(std::size_t batch) const;

private:
    ModelConfig config_;
    std::vector<std::size_t> input_extents_;
    std::vector<std::unique_ptr<Layer>> layers_;
};

/// Softmax rows of (B, K) logits.
Tensor softmax(const Tensor& logits);

struct LossGrad {
    double loss = 0.0;
    Tensor grad_logits;  ///< d(mean CE)/d(logits)
};

/// Mean softmax cross-entropy over the batch and its logits gradient.
LossGrad softmax_cross_entropy(const Tensor& logits, const std::vector<int>& labels);

/// Convenience: forward + loss + full backward pass. Parameter grads are
/// zeroed first, so this computes (not accumulates) the batch gradient.
double loss_and_grad(Model& model, const Tensor& batch, const std::vector<int>& labels);

}  // namespace bvpkit::nn
