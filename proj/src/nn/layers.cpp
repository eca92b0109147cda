#include "bvpkit/nn/layers.hpp"

#include <algorithm>
#include <cmath>

namespace bvpkit::nn {

namespace {

void check_rank(const Tensor& t, std::size_t rank, const char* who) {
    if (t.rank() != rank)
        throw ShapeError(std::string(who) + ": expected rank " + std::to_string(rank) +
                         " input, got shape " + t.shape_str());
}

}  // namespace

// ---------------------------------------------------------------- Conv1D

Conv1D::Conv1D(std::size_t in_channels, std::size_t filters, std::size_t kernel)
    : in_c_(in_channels), filters_(filters), kernel_(kernel) {
    weight_.name = "conv1d.weight";
    weight_.value = Tensor({filters_, in_c_, kernel_});
    weight_.grad = Tensor({filters_, in_c_, kernel_});
    bias_.name = "conv1d.bias";
    bias_.value = Tensor({filters_});
    bias_.grad = Tensor({filters_});
}

std::vector<std::size_t> Conv1D::output_shape(const std::vector<std::size_t>& in) const {
    if (in.size() != 3 || in[1] != in_c_ || in[2] < kernel_)
        throw ShapeError("conv1d: bad input shape; need (B, " + std::to_string(in_c_) +
                         ", >=" + std::to_string(kernel_) + ")");
    return {in[0], filters_, in[2] - kernel_ + 1};
}

Tensor Conv1D::forward(const Tensor& in) {
    check_rank(in, 3, "conv1d");
    const auto out_shape = output_shape(in.shape);
    input_ = in;

    const std::size_t b_n = in.dim(0), l_in = in.dim(2), l_out = out_shape[2];
    Tensor out(out_shape);
    for (std::size_t b = 0; b < b_n; ++b) {
        for (std::size_t f = 0; f < filters_; ++f) {
            const double bias = bias_.value[f];
            double* dst = &out.data[(b * filters_ + f) * l_out];
            for (std::size_t c = 0; c < in_c_; ++c) {
                const double* src = &in.data[(b * in_c_ + c) * l_in];
                const double* w = &weight_.value.data[(f * in_c_ + c) * kernel_];
                for (std::size_t t = 0; t < l_out; ++t) {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < kernel_; ++k) acc += w[k] * src[t + k];
                    dst[t] += acc;
                }
            }
            for (std::size_t t = 0; t < l_out; ++t) dst[t] += bias;
        }
    }
    return out;
}

Tensor Conv1D::backward(const Tensor& grad_out) {
    const std::size_t b_n = input_.dim(0), l_in = input_.dim(2);
    const std::size_t l_out = grad_out.dim(2);

    Tensor grad_in(input_.shape);
    for (std::size_t b = 0; b < b_n; ++b) {
        for (std::size_t f = 0; f < filters_; ++f) {
            const double* g = &grad_out.data[(b * filters_ + f) * l_out];
            double bias_acc = 0.0;
            for (std::size_t t = 0; t < l_out; ++t) bias_acc += g[t];
            bias_.grad[f] += bias_acc;
            for (std::size_t c = 0; c < in_c_; ++c) {
                const double* src = &input_.data[(b * in_c_ + c) * l_in];
                const double* w = &weight_.value.data[(f * in_c_ + c) * kernel_];
                double* wg = &weight_.grad.data[(f * in_c_ + c) * kernel_];
                double* gi = &grad_in.data[(b * in_c_ + c) * l_in];
                for (std::size_t t = 0; t < l_out; ++t) {
                    const double gt = g[t];
                    for (std::size_t k = 0; k < kernel_; ++k) {
                        wg[k] += gt * src[t + k];
                        gi[t + k] += gt * w[k];
                    }
                }
            }
        }
    }
    return grad_in;
}

// ---------------------------------------------------------------- Conv2D

Conv2D::Conv2D(std::size_t in_channels, std::size_t filters, std::size_t kernel)
    : in_c_(in_channels), filters_(filters), kernel_(kernel) {
    weight_.name = "conv2d.weight";
    weight_.value = Tensor({filters_, in_c_, kernel_, kernel_});
    weight_.grad = Tensor({filters_, in_c_, kernel_, kernel_});
    bias_.name = "conv2d.bias";
    bias_.value = Tensor({filters_});
    bias_.grad = Tensor({filters_});
}

std::vector<std::size_t> Conv2D::output_shape(const std::vector<std::size_t>& in) const {
    if (in.size() != 4 || in[1] != in_c_ || in[2] < kernel_ || in[3] < kernel_)
        throw ShapeError("conv2d: bad input shape; need (B, " + std::to_string(in_c_) +
                         ", >=" + std::to_string(kernel_) + ", >=" + std::to_string(kernel_) +
                         ")");
    return {in[0], filters_, in[2] - kernel_ + 1, in[3] - kernel_ + 1};
}

Tensor Conv2D::forward(const Tensor& in) {
    check_rank(in, 4, "conv2d");
    const auto out_shape = output_shape(in.shape);
    input_ = in;

    const std::size_t b_n = in.dim(0), h_in = in.dim(2), w_in = in.dim(3);
    const std::size_t h_out = out_shape[2], w_out = out_shape[3];
    Tensor out(out_shape);
    for (std::size_t b = 0; b < b_n; ++b) {
        for (std::size_t f = 0; f < filters_; ++f) {
            double* dst = &out.data[((b * filters_ + f) * h_out) * w_out];
            for (std::size_t c = 0; c < in_c_; ++c) {
                const double* src = &in.data[((b * in_c_ + c) * h_in) * w_in];
                const double* w = &weight_.value.data[((f * in_c_ + c) * kernel_) * kernel_];
                for (std::size_t y = 0; y < h_out; ++y) {
                    for (std::size_t x = 0; x < w_out; ++x) {
                        double acc = 0.0;
                        for (std::size_t ky = 0; ky < kernel_; ++ky)
                            for (std::size_t kx = 0; kx < kernel_; ++kx)
                                acc += w[ky * kernel_ + kx] * src[(y + ky) * w_in + (x + kx)];
                        dst[y * w_out + x] += acc;
                    }
                }
            }
            const double bias = bias_.value[f];
            for (std::size_t i = 0; i < h_out * w_out; ++i) dst[i] += bias;
        }
    }
    return out;
}

Tensor Conv2D::backward(const Tensor& grad_out) {
    const std::size_t b_n = input_.dim(0), h_in = input_.dim(2), w_in = input_.dim(3);
    const std::size_t h_out = grad_out.dim(2), w_out = grad_out.dim(3);

    Tensor grad_in(input_.shape);
    for (std::size_t b = 0; b < b_n; ++b) {
        for (std::size_t f = 0; f < filters_; ++f) {
            const double* g = &grad_out.data[((b * filters_ + f) * h_out) * w_out];
            double bias_acc = 0.0;
            for (std::size_t i = 0; i < h_out * w_out; ++i) bias_acc += g[i];
            bias_.grad[f] += bias_acc;
            for (std::size_t c = 0; c < in_c_; ++c) {
                const double* src = &input_.data[((b * in_c_ + c) * h_in) * w_in];
                const double* w = &weight_.value.data[((f * in_c_ + c) * kernel_) * kernel_];
                double* wg = &weight_.grad.data[((f * in_c_ + c) * kernel_) * kernel_];
                double* gi = &grad_in.data[((b * in_c_ + c) * h_in) * w_in];
                for (std::size_t y = 0; y < h_out; ++y) {
                    for (std::size_t x = 0; x < w_out; ++x) {
                        const double gt = g[y * w_out + x];
                        if (gt == 0.0) continue;
                        for (std::size_t ky = 0; ky < kernel_; ++ky) {
                            for (std::size_t kx = 0; kx < kernel_; ++kx) {
                                wg[ky * kernel_ + kx] += gt * src[(y + ky) * w_in + (x + kx)];
                                gi[(y + ky) * w_in + (x + kx)] += gt * w[ky * kernel_ + kx];
                            }
                        }
                    }
                }
            }
        }
    }
    return grad_in;
}

// ------------------------------------------------------------------ ReLU

Tensor ReLU::forward(const Tensor& in) {
    input_ = in;
    Tensor out(in.shape);
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
    return out;
}

Tensor ReLU::backward(const Tensor& grad_out) {
    Tensor grad_in(input_.shape);
    for (std::size_t i = 0; i < input_.size(); ++i)
        grad_in[i] = input_[i] > 0.0 ? grad_out[i] : 0.0;
    return grad_in;
}

// ------------------------------------------------------------- MaxPool1D

std::vector<std::size_t> MaxPool1D::output_shape(const std::vector<std::size_t>& in) const {
    if (in.size() != 3 || in[2] < size_)
        throw ShapeError("maxpool1d: input too short for pool size " + std::to_string(size_));
    return {in[0], in[1], in[2] / size_};
}

Tensor MaxPool1D::forward(const Tensor& in) {
    check_rank(in, 3, "maxpool1d");
    const auto out_shape = output_shape(in.shape);
    in_shape_ = in.shape;

    const std::size_t rows = in.dim(0) * in.dim(1), l_in = in.dim(2), l_out = out_shape[2];
    Tensor out(out_shape);
    argmax_.assign(rows * l_out, 0);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* src = &in.data[r * l_in];
        for (std::size_t t = 0; t < l_out; ++t) {
            std::size_t best = t * size_;
            for (std::size_t k = 1; k < size_; ++k)
                if (src[t * size_ + k] > src[best]) best = t * size_ + k;
            out.data[r * l_out + t] = src[best];
            argmax_[r * l_out + t] = best;
        }
    }
    return out;
}

Tensor MaxPool1D::backward(const Tensor& grad_out) {
    Tensor grad_in(in_shape_);
    const std::size_t rows = in_shape_[0] * in_shape_[1], l_in = in_shape_[2];
    const std::size_t l_out = grad_out.dim(2);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t t = 0; t < l_out; ++t)
            grad_in.data[r * l_in + argmax_[r * l_out + t]] += grad_out.data[r * l_out + t];
    return grad_in;
}

// ------------------------------------------------------------- MaxPool2D

std::vector<std::size_t> MaxPool2D::output_shape(const std::vector<std::size_t>& in) const {
    if (in.size() != 4 || in[2] < size_ || in[3] < size_)
        throw ShapeError("maxpool2d: input too small for pool size " + std::to_string(size_));
    return {in[0], in[1], in[2] / size_, in[3] / size_};
}

Tensor MaxPool2D::forward(const Tensor& in) {
    check_rank(in, 4, "maxpool2d");
    const auto out_shape = output_shape(in.shape);
    in_shape_ = in.shape;

    const std::size_t rows = in.dim(0) * in.dim(1);
    const std::size_t h_in = in.dim(2), w_in = in.dim(3);
    const std::size_t h_out = out_shape[2], w_out = out_shape[3];
    Tensor out(out_shape);
    argmax_.assign(rows * h_out * w_out, 0);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* src = &in.data[r * h_in * w_in];
        for (std::size_t y = 0; y < h_out; ++y) {
            for (std::size_t x = 0; x < w_out; ++x) {
                std::size_t best = (y * size_) * w_in + x * size_;
                for (std::size_t ky = 0; ky < size_; ++ky)
                    for (std::size_t kx = 0; kx < size_; ++kx) {
                        const std::size_t idx = (y * size_ + ky) * w_in + (x * size_ + kx);
                        if (src[idx] > src[best]) best = idx;
                    }
                out.data[(r * h_out + y) * w_out + x] = src[best];
                argmax_[(r * h_out + y) * w_out + x] = best;
            }
        }
    }
    return out;
}

Tensor MaxPool2D::backward(const Tensor& grad_out) {
    Tensor grad_in(in_shape_);
    const std::size_t rows = in_shape_[0] * in_shape_[1];
    const std::size_t h_in = in_shape_[2], w_in = in_shape_[3];
    const std::size_t h_out = grad_out.dim(2), w_out = grad_out.dim(3);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t i = 0; i < h_out * w_out; ++i)
            grad_in.data[r * h_in * w_in + argmax_[r * h_out * w_out + i]] +=
                grad_out.data[r * h_out * w_out + i];
    return grad_in;
}

// --------------------------------------------------------- GlobalAvgPool

std::vector<std::size_t> GlobalAvgPool::output_shape(const std::vector<std::size_t>& in) const {
    if (in.size() < 3) throw ShapeError("global_avg_pool: need (B, C, spatial...)");
    return {in[0], in[1]};
}

Tensor GlobalAvgPool::forward(const Tensor& in) {
    const auto out_shape = output_shape(in.shape);
    in_shape_ = in.shape;
    std::size_t spatial = 1;
    for (std::size_t i = 2; i < in.rank(); ++i) spatial *= in.dim(i);

    const std::size_t rows = in.dim(0) * in.dim(1);
    Tensor out(out_shape);
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = 0.0;
        for (std::size_t i = 0; i < spatial; ++i) acc += in.data[r * spatial + i];
        out.data[r] = acc / static_cast<double>(spatial);
    }
    return out;
}

Tensor GlobalAvgPool::backward(const Tensor& grad_out) {
    Tensor grad_in(in_shape_);
    std::size_t spatial = 1;
    for (std::size_t i = 2; i < in_shape_.size(); ++i) spatial *= in_shape_[i];
    const std::size_t rows = in_shape_[0] * in_shape_[1];
    for (std::size_t r = 0; r < rows; ++r) {
        const double g = grad_out.data[r] / static_cast<double>(spatial);
        for (std::size_t i = 0; i < spatial; ++i) grad_in.data[r * spatial + i] = g;
    }
    return grad_in;
}

// ----------------------------------------------------------------- Dense

Dense::Dense(std::size_t in_features, std::size_t out_features)
    : in_f_(in_features), out_f_(out_features) {
    weight_.name = "dense.weight";
    weight_.value = Tensor({out_f_, in_f_});
    weight_.grad = Tensor({out_f_, in_f_});
    bias_.name = "dense.bias";
    bias_.value = Tensor({out_f_});
    bias_.grad = Tensor({out_f_});
}

std::vector<std::size_t> Dense::output_shape(const std::vector<std::size_t>& in) const {
    if (in.size() != 2 || in[1] != in_f_)
        throw ShapeError("dense: expected (B, " + std::to_string(in_f_) + ") input");
    return {in[0], out_f_};
}

Tensor Dense::forward(const Tensor& in) {
    check_rank(in, 2, "dense");
    const auto out_shape = output_shape(in.shape);
    input_ = in;

    const std::size_t b_n = in.dim(0);
    Tensor out(out_shape);
    for (std::size_t b = 0; b < b_n; ++b) {
        const double* src = &in.data[b * in_f_];
        double* dst = &out.data[b * out_f_];
        for (std::size_t o = 0; o < out_f_; ++o) {
            const double* w = &weight_.value.data[o * in_f_];
            double acc = bias_.value[o];
            for (std::size_t i = 0; i < in_f_; ++i) acc += w[i] * src[i];
            dst[o] = acc;
        }
    }
    return out;
}

Tensor Dense::backward(const Tensor& grad_out) {
    const std::size_t b_n = input_.dim(0);
    Tensor grad_in(input_.shape);
    for (std::size_t b = 0; b < b_n; ++b) {
        const double* src = &input_.data[b * in_f_];
        const double* g = &grad_out.data[b * out_f_];
        double* gi = &grad_in.data[b * in_f_];
        for (std::size_t o = 0; o < out_f_; ++o) {
            const double gt = g[o];
            bias_.grad[o] += gt;
            double* wg = &weight_.grad.data[o * in_f_];
            const double* w = &weight_.value.data[o * in_f_];
            for (std::size_t i = 0; i < in_f_; ++i) {
                wg[i] += gt * src[i];
                gi[i] += gt * w[i];
            }
        }
    }
    return grad_in;
}

}  // namespace bvpkit::nn
