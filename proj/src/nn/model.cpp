#include "bvpkit/nn/model.hpp"

#include <cmath>
#include <random>

#include "bvpkit/rng.hpp"

namespace bvpkit::nn {

namespace {

/// He-uniform fan-in initialization.
void init_he_uniform(Tensor& w, std::size_t fan_in, std::mt19937_64& eng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (double& v : w.data) {
        const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;  // [0,1)
        v = (2.0 * u - 1.0) * limit;
    }
}

}  // namespace

std::string to_string(Variant v) { return v == Variant::Raw1D ? "raw1d" : "gaf2d"; }

ModelConfig ModelConfig::raw1d_default(std::uint64_t seed) {
    ModelConfig cfg;
    cfg.variant = Variant::Raw1D;
    cfg.stages = {{32, 8, 4}, {64, 8, 0}};
    cfg.seed = seed;
    return cfg;
}

ModelConfig ModelConfig::gaf2d_default(std::uint64_t seed) {
    ModelConfig cfg;
    cfg.variant = Variant::Gaf2D;
    cfg.stages = {{16, 3, 2}, {32, 3, 2}};
    cfg.seed = seed;
    return cfg;
}

Model::Model(const ModelConfig& config, const std::vector<std::size_t>& input_extents)
    : config_(config), input_extents_(input_extents) {
    const bool is_1d = config.variant == Variant::Raw1D;
    if (is_1d && input_extents_.size() != 1)
        throw ShapeError("Raw1D model needs one input extent (window length)");
    if (!is_1d && input_extents_.size() != 2)
        throw ShapeError("Gaf2D model needs two input extents (image size)");
    if (config.num_classes < 2) throw ShapeError("model needs at least 2 classes");
    if (config.stages.empty()) throw ShapeError("model needs at least one conv stage");

    std::mt19937_64 eng(mix_seed(config.seed, 0x11ULL));

    // Track the running shape (without batch) to validate kernels fit.
    std::vector<std::size_t> shape;
    shape.push_back(1);  // channels
    for (std::size_t e : input_extents_) shape.push_back(e);

    std::size_t channels = 1;
    for (const ConvStage& st : config.stages) {
        if (is_1d) {
            if (shape[1] < st.kernel)
                throw ShapeError("conv kernel " + std::to_string(st.kernel) +
                                 " exceeds input extent " + std::to_string(shape[1]));
            auto conv = std::make_unique<Conv1D>(channels, st.filters, st.kernel);
            init_he_uniform(conv->weight_.value, channels * st.kernel, eng);
            shape = {st.filters, shape[1] - st.kernel + 1};
            layers_.push_back(std::move(conv));
            layers_.push_back(std::make_unique<ReLU>());
            if (st.pool > 1) {
                if (shape[1] < st.pool)
                    throw ShapeError("pool size " + std::to_string(st.pool) +
                                     " exceeds feature length " + std::to_string(shape[1]));
                layers_.push_back(std::make_unique<MaxPool1D>(st.pool));
                shape[1] /= st.pool;
            }
        } else {
            if (shape[1] < st.kernel || shape[2] < st.kernel)
                throw ShapeError("conv kernel " + std::to_string(st.kernel) +
                                 " exceeds input extents");
            auto conv = std::make_unique<Conv2D>(channels, st.filters, st.kernel);
            init_he_uniform(conv->weight_.value, channels * st.kernel * st.kernel, eng);
            shape = {st.filters, shape[1] - st.kernel + 1, shape[2] - st.kernel + 1};
            layers_.push_back(std::move(conv));
            layers_.push_back(std::make_unique<ReLU>());
            if (st.pool > 1) {
                if (shape[1] < st.pool || shape[2] < st.pool)
                    throw ShapeError("pool size " + std::to_string(st.pool) +
                                     " exceeds feature extents");
                layers_.push_back(std::make_unique<MaxPool2D>(st.pool));
                shape[1] /= st.pool;
                shape[2] /= st.pool;
            }
        }
        channels = st.filters;
    }

    layers_.push_back(std::make_unique<GlobalAvgPool>());
    std::size_t width = channels;
    for (std::size_t hidden : config.dense_widths) {
        auto dense = std::make_unique<Dense>(width, hidden);
        init_he_uniform(dense->weight_.value, width, eng);
        layers_.push_back(std::move(dense));
        layers_.push_back(std::make_unique<ReLU>());
        width = hidden;
    }
    auto head = std::make_unique<Dense>(width, config.num_classes);
    init_he_uniform(head->weight_.value, width, eng);
    layers_.push_back(std::move(head));
}

std::vector<std::size_t> Model::batch_shape(std::size_t batch) const {
    std::vector<std::size_t> s{batch, 1};
    for (std::size_t e : input_extents_) s.push_back(e);
    return s;
}

Tensor Model::forward(const Tensor& batch) {
    require_shape(batch, batch_shape(batch.shape.empty() ? 0 : batch.shape[0]), "model forward");
    Tensor x = batch;
    for (auto& layer : layers_) x = layer->forward(x);
    return x;
}

Tensor Model::backward(const Tensor& grad_logits) {
    Tensor g = grad_logits;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
    return g;
}

void Model::zero_grad() {
    for (auto& layer : layers_) layer->zero_grad();
}

std::vector<Param*> Model::params() {
    std::vector<Param*> all;
    for (auto& layer : layers_)
        for (Param* p : layer->params()) all.push_back(p);
    return all;
}

Tensor softmax(const Tensor& logits) {
    const std::size_t b_n = logits.dim(0), k = logits.dim(1);
    Tensor out(logits.shape);
    for (std::size_t b = 0; b < b_n; ++b) {
        const double* row = &logits.data[b * k];
        double mx = row[0];
        for (std::size_t i = 1; i < k; ++i) mx = std::max(mx, row[i]);
        double z = 0.0;
        for (std::size_t i = 0; i < k; ++i) z += std::exp(row[i] - mx);
        for (std::size_t i = 0; i < k; ++i) out.data[b * k + i] = std::exp(row[i] - mx) / z;
    }
    return out;
}

LossGrad softmax_cross_entropy(const Tensor& logits, const std::vector<int>& labels) {
    const std::size_t b_n = logits.dim(0), k = logits.dim(1);
    if (labels.size() != b_n)
        throw ShapeError("cross entropy: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(b_n) + " rows");

    LossGrad lg;
    lg.grad_logits = softmax(logits);
    double loss = 0.0;
    for (std::size_t b = 0; b < b_n; ++b) {
        const int y = labels[b];
        if (y < 0 || static_cast<std::size_t>(y) >= k)
            throw ShapeError("cross entropy: label " + std::to_string(y) + " outside [0, " +
                             std::to_string(k) + ")");
        const double py = lg.grad_logits.data[b * k + static_cast<std::size_t>(y)];
        loss -= std::log(std::max(py, 1e-300));
        lg.grad_logits.data[b * k + static_cast<std::size_t>(y)] -= 1.0;
    }
    const double scale = 1.0 / static_cast<double>(b_n);
    for (double& v : lg.grad_logits.data) v *= scale;
    lg.loss = loss * scale;
    return lg;
}

double loss_and_grad(Model& model, const Tensor& batch, const std::vector<int>& labels) {
    model.zero_grad();
    const Tensor logits = model.forward(batch);
    LossGrad lg = softmax_cross_entropy(logits, labels);
    model.backward(lg.grad_logits);
    return lg.loss;
}

}  // namespace bvpkit::nn
