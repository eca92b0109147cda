#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bvpkit/condition.hpp"
#include "bvpkit/gaf.hpp"
#include "bvpkit/nn/model.hpp"
#include "bvpkit/nn/optim.hpp"
#include "bvpkit/windowing.hpp"

namespace bvpkit::nn {

/// Labeled model inputs: (N, 1, L) windows or (N, 1, S, S) images.
struct Dataset {
    Tensor inputs;
    std::vector<int> labels;                ///< 0..3 (condition index)
    std::vector<std::string> participants;  ///< optional; enables ByParticipant splits

    std::size_t count() const { return labels.size(); }
    /// Copies the given rows into a batch tensor.
    Tensor gather(const std::vector<std::size_t>& rows) const;
};

/// Window rows as 1D samples, each window rescaled to [-1,1] by default
/// so amplitude offsets between sessions do not dominate.
Dataset dataset_from_windows(const windowing::WindowSet& windows, bool rescale_rows = true);

/// GAF images as 2D samples.
Dataset dataset_from_gaf(const std::vector<gaf::GafImage>& images,
                         const std::vector<Condition>& labels,
                         const std::vector<std::string>& participants = {});

enum class SplitMode { ByWindow, ByParticipant };

struct TrainConfig {
    double learning_rate = 0.001;
    std::size_t batch_size = 32;
    std::size_t epochs = 30;
    double train_fraction = 0.70;
    double val_fraction = 0.15;
    double test_fraction = 0.15;
    SplitMode split_mode = SplitMode::ByWindow;
    std::optional<std::size_t> early_stop_patience;  ///< epochs without val improvement
    std::uint64_t seed = 0;

    void validate() const;
};

struct SplitIndices {
    std::vector<std::size_t> train, val, test;
};

/// Seeded stratified split. ByWindow stratifies per class; ByParticipant
/// keeps each participant's windows in one partition. Throws DataError
/// when any class ends up absent from the training partition.
SplitIndices split_dataset(const Dataset& data, const TrainConfig& cfg);

struct EpochStats {
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double val_accuracy = 0.0;
};

struct TrainReport {
    std::vector<EpochStats> epochs;
    double test_accuracy = 0.0;
    std::array<std::array<std::size_t, 4>, 4> confusion{};  ///< rows = true class
    ModelConfig model_config;
    TrainConfig train_config;
    std::string early_stop_reason;  ///< empty when all epochs ran
    double wall_seconds = 0.0;      ///< excluded from determinism comparisons
};

struct EvalResult {
    double accuracy = 0.0;
    std::array<std::array<std::size_t, 4>, 4> confusion{};
    std::size_t total = 0;
};

/// Accuracy and confusion matrix of the model over the given rows
/// (all rows when `rows` is empty... pass explicit indices for splits).
EvalResult evaluate(Model& model, const Dataset& data, const std::vector<std::size_t>& rows);
EvalResult evaluate(Model& model, const Dataset& data);

/// Full deterministic training run: stratified split, shuffled
/// mini-batches, Adam, per-epoch stats, final test evaluation.
/// `trained_out`, when given, receives the final weights.
TrainReport train(const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                  const Dataset& data, std::optional<Model>* trained_out = nullptr);

}  // namespace bvpkit::nn
