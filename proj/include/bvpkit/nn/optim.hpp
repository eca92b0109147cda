#pragma once

#include <cstdint>
#include <vector>

#include "bvpkit/nn/layers.hpp"

namespace bvpkit::nn {

/// Adam with bias correction (Kingma & Ba 2015 defaults).
struct AdamConfig {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

class Adam {
public:
    Adam(std::vector<Param*> params, AdamConfig cfg = {});

    /// One update from the gradients currently stored on the params.
    void step();

    std::uint64_t step_count() const { return t_; }
    const AdamConfig& config() const { return cfg_; }

private:
    std::vector<Param*> params_;
    std::vector<std::vector<double>> m_, v_;
    AdamConfig cfg_;
    std::uint64_t t_ = 0;
};

}  // namespace bvpkit::nn
