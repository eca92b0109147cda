#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bvpkit/nn/tensor.hpp"

namespace bvpkit::nn {

/// A trainable tensor with its gradient accumulator.
struct Param {
    std::string name;
    Tensor value;
    Tensor grad;
};

/// Sequential layer. forward() caches whatever backward() needs, so one
/// forward must precede each backward. Parameter gradients accumulate
/// until zero_grad().
class Layer {
public:
    virtual ~Layer() = default;
    virtual Tensor forward(const Tensor& in) = 0;
    virtual Tensor backward(const Tensor& grad_out) = 0;
    virtual std::vector<Param*> params() { return {}; }
    virtual std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const = 0;
    virtual std::string name() const = 0;

    void zero_grad() {
        for (Param* p : params()) p->grad.fill(0.0);
    }
};

/// 1D valid cross-correlation, stride 1. Input (B, C, L), output
/// (B, F, L - K + 1). Weights (F, C, K).
class Conv1D : public Layer {
public:
    Conv1D(std::size_t in_channels, std::size_t filters, std::size_t kernel);
    Tensor forward(const Tensor& in) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Param*> params() override { return {&weight_, &bias_}; }
    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override;
    std::string name() const override { return "conv1d"; }

    Param weight_, bias_;

private:
    std::size_t in_c_, filters_, kernel_;
    Tensor input_;
};

/// 2D valid cross-correlation, stride 1. Input (B, C, H, W), output
/// (B, F, H - K + 1, W - K + 1). Weights (F, C, K, K).
class Conv2D : public Layer {
public:
    Conv2D(std::size_t in_channels, std::size_t filters, std::size_t kernel);
    Tensor forward(const Tensor& in) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Param*> params() override { return {&weight_, &bias_}; }
    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override;
    std::string name() const override { return "conv2d"; }

    Param weight_, bias_;

private:
    std::size_t in_c_, filters_, kernel_;
    Tensor input_;
};

class ReLU : public Layer {
public:
    Tensor forward(const Tensor& in) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override {
        return in;
    }
    std::string name() const override { return "relu"; }

private:
    Tensor input_;
};

/// Non-overlapping max pooling over the last axis; trailing remainder
/// samples are dropped.
class MaxPool1D : public Layer {
public:
    explicit MaxPool1D(std::size_t size) : size_(size) {}
    Tensor forward(const Tensor& in) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override;
    std::string name() const override { return "maxpool1d"; }

private:
    std::size_t size_;
    std::vector<std::size_t> argmax_;
    std::vector<std::size_t> in_shape_;
};

/// Non-overlapping 2D max pooling (size x size), remainders dropped.
class MaxPool2D : public Layer {
public:
    explicit MaxPool2D(std::size_t size) : size_(size) {}
    Tensor forward(const Tensor& in) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override;
    std::string name() const override { return "maxpool2d"; }

private:
    std::size_t size_;
    std::vector<std::size_t> argmax_;
    std::vector<std::size_t> in_shape_;
};

/// Mean over all spatial axes: (B, C, ...) -> (B, C).
class GlobalAvgPool : public Layer {
public:
    Tensor forward(const Tensor& in) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override;
    std::string name() const override { return "global_avg_pool"; }

private:
    std::vector<std::size_t> in_shape_;
};

/// Fully connected (B, In) -> (B, Out). Weights (Out, In).
class Dense : public Layer {
public:
    Dense(std::size_t in_features, std::size_t out_features);
    Tensor forward(const Tensor& in) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Param*> params() override { return {&weight_, &bias_}; }
    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override;
    std::string name() const override { return "dense"; }

    Param weight_, bias_;

private:
    std::size_t in_f_, out_f_;
    Tensor input_;
};

}  // namespace bvpkit::nn
