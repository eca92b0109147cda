#include "bvpkit/nn/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "bvpkit/errors.hpp"
#include "bvpkit/rng.hpp"

namespace bvpkit::nn {

namespace {

std::size_t row_elements(const Tensor& inputs) {
    std::size_t n = 1;
    for (std::size_t i = 1; i < inputs.rank(); ++i) n *= inputs.dim(i);
    return n;
}

int argmax_row(const double* row, std::size_t k) {
    int best = 0;
    for (std::size_t i = 1; i < k; ++i)
        if (row[i] > row[best]) best = static_cast<int>(i);
    return best;
}

}  // namespace

Tensor Dataset::gather(const std::vector<std::size_t>& rows) const {
    const std::size_t elems = row_elements(inputs);
    std::vector<std::size_t> shape = inputs.shape;
    shape[0] = rows.size();
    Tensor out(shape);
    for (std::size_t r = 0; r < rows.size(); ++r)
        std::copy_n(inputs.data.begin() + static_cast<std::ptrdiff_t>(rows[r] * elems), elems,
                    out.data.begin() + static_cast<std::ptrdiff_t>(r * elems));
    return out;
}

Dataset dataset_from_windows(const windowing::WindowSet& windows, bool rescale_rows) {
    const std::size_t n = windows.count();
    const std::size_t p = windows.spec.window_len_p;
    Dataset d;
    d.inputs = Tensor({n, 1, p});
    d.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = windows.row(i);
        if (rescale_rows) {
            const auto rw = windowing::rescale(row, windowing::ScaleMode::NegOneOne);
            std::copy(rw.values.begin(), rw.values.end(), d.inputs.data.begin() + i * p);
        } else {
            std::copy(row.begin(), row.end(), d.inputs.data.begin() + i * p);
        }
        d.labels.push_back(condition_index(windows.labels[i]));
    }
    d.participants = windows.participants;
    return d;
}

Dataset dataset_from_gaf(const std::vector<gaf::GafImage>& images,
                         const std::vector<Condition>& labels,
                         const std::vector<std::string>& participants) {
    if (images.empty()) throw DataError("dataset_from_gaf: no images");
    if (labels.size() != images.size())
        throw DataError("dataset_from_gaf: label count mismatch");
    const std::size_t s = images.front().size;
    Dataset d;
    d.inputs = Tensor({images.size(), 1, s, s});
    d.labels.reserve(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].size != s) throw DataError("dataset_from_gaf: mixed image sizes");
        std::copy(images[i].matrix.begin(), images[i].matrix.end(),
                  d.inputs.data.begin() + i * s * s);
        d.labels.push_back(condition_index(labels[i]));
    }
    d.participants = participants;
    return d;
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw DataError("TrainConfig: learning rate must be positive");
    if (batch_size == 0) throw DataError("TrainConfig: batch size must be positive");
    if (epochs == 0) throw DataError("TrainConfig: epochs must be positive");
    const double sum = train_fraction + val_fraction + test_fraction;
    if (!(train_fraction > 0.0) || !(val_fraction > 0.0) || !(test_fraction > 0.0) ||
        std::fabs(sum - 1.0) > 1e-9)
        throw DataError("TrainConfig: split fractions must be positive and sum to 1");
}

SplitIndices split_dataset(const Dataset& data, const TrainConfig& cfg) {
    cfg.validate();
    const std::size_t n = data.count();
    if (n == 0) throw DataError("split_dataset: empty dataset");

    SplitIndices split;
    std::mt19937_64 eng(mix_seed(cfg.seed, 0x51ULL));

    if (cfg.split_mode == SplitMode::ByWindow) {
        // stratified per class so small corpora keep all classes everywhere
        std::map<int, std::vector<std::size_t>> by_class;
        for (std::size_t i = 0; i < n; ++i) by_class[data.labels[i]].push_back(i);
        for (auto& [cls, idx] : by_class) {
            (void)cls;
            std::shuffle(idx.begin(), idx.end(), eng);
            const std::size_t n_test = static_cast<std::size_t>(
                std::floor(cfg.test_fraction * static_cast<double>(idx.size())));
            const std::size_t n_val = static_cast<std::size_t>(
                std::floor(cfg.val_fraction * static_cast<double>(idx.size())));
            std::size_t i = 0;
            for (; i < n_test; ++i) split.test.push_back(idx[i]);
            for (; i < n_test + n_val; ++i) split.val.push_back(idx[i]);
            for (; i < idx.size(); ++i) split.train.push_back(idx[i]);
        }
    } else {
        if (data.participants.size() != n)
            throw DataError("split_dataset: ByParticipant needs participant ids on every row");
        std::map<std::string, std::vector<std::size_t>> by_who;
        for (std::size_t i = 0; i < n; ++i) by_who[data.participants[i]].push_back(i);
        if (by_who.size() < 3)
            throw DataError("split_dataset: ByParticipant needs at least 3 participants, got " +
                            std::to_string(by_who.size()));

        std::vector<std::string> who;
        for (const auto& [w, _] : by_who) who.push_back(w);
        std::shuffle(who.begin(), who.end(), eng);

        const auto n_d = static_cast<double>(n);
        std::size_t assigned_test = 0, assigned_val = 0;
        for (const std::string& w : who) {
            auto& rows = by_who[w];
            if (static_cast<double>(assigned_test) < cfg.test_fraction * n_d) {
                split.test.insert(split.test.end(), rows.begin(), rows.end());
                assigned_test += rows.size();
            } else if (static_cast<double>(assigned_val) < cfg.val_fraction * n_d) {
                split.val.insert(split.val.end(), rows.begin(), rows.end());
                assigned_val += rows.size();
            } else {
                split.train.insert(split.train.end(), rows.begin(), rows.end());
            }
        }
    }

    std::sort(split.train.begin(), split.train.end());
    std::sort(split.val.begin(), split.val.end());
    std::sort(split.test.begin(), split.test.end());

    std::array<bool, 4> present{};
    for (std::size_t i : split.train) present[static_cast<std::size_t>(data.labels[i])] = true;
    for (int c = 0; c < 4; ++c)
        if (!present[static_cast<std::size_t>(c)])
            throw DataError("split_dataset: class " + to_string(static_cast<Condition>(c)) +
                            " missing from the training split");
    if (split.val.empty() || split.test.empty())
        throw DataError("split_dataset: validation/test split is empty; dataset too small");
    return split;
}

EvalResult evaluate(Model& model, const Dataset& data, const std::vector<std::size_t>& rows) {
    if (rows.empty()) throw DataError("evaluate: no rows");
    const std::size_t k = model.config().num_classes;

    EvalResult res;
    res.total = rows.size();
    // batched so evaluation of large sets stays cache-friendly
    const std::size_t chunk = 64;
    std::size_t correct = 0;
    for (std::size_t ofs = 0; ofs < rows.size(); ofs += chunk) {
        const std::size_t m = std::min(chunk, rows.size() - ofs);
        std::vector<std::size_t> batch_rows(rows.begin() + static_cast<std::ptrdiff_t>(ofs),
                                            rows.begin() + static_cast<std::ptrdiff_t>(ofs + m));
        const Tensor logits = model.forward(data.gather(batch_rows));
        for (std::size_t i = 0; i < m; ++i) {
            const int pred = argmax_row(&logits.data[i * k], k);
            const int truth = data.labels[batch_rows[i]];
            res.confusion[static_cast<std::size_t>(truth)][static_cast<std::size_t>(pred)]++;
            if (pred == truth) ++correct;
        }
    }
    res.accuracy = static_cast<double>(correct) / static_cast<double>(res.total);
    return res;
}

EvalResult evaluate(Model& model, const Dataset& data) {
    std::vector<std::size_t> all(data.count());
    std::iota(all.begin(), all.end(), 0);
    return evaluate(model, data, all);
}

TrainReport train(const ModelConfig& model_cfg, const TrainConfig& train_cfg, const Dataset& data,
                  std::optional<Model>* trained_out) {
    const auto t0 = std::chrono::steady_clock::now();
    train_cfg.validate();
    if (data.count() == 0) throw DataError("train: empty dataset");

    std::vector<std::size_t> extents(data.inputs.shape.begin() + 2, data.inputs.shape.end());
    Model model(model_cfg, extents);
    Adam adam(model.params(), AdamConfig{train_cfg.learning_rate, 0.9, 0.999, 1e-8});

    const SplitIndices split = split_dataset(data, train_cfg);

    TrainReport report;
    report.model_config = model_cfg;
    report.train_config = train_cfg;

    std::mt19937_64 shuffle_eng(mix_seed(train_cfg.seed, 0x7EALL));
    std::vector<std::size_t> order = split.train;

    double best_val = -1.0;
    std::size_t since_best = 0;

    for (std::size_t epoch = 0; epoch < train_cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_eng);

        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t ofs = 0; ofs < order.size(); ofs += train_cfg.batch_size) {
            const std::size_t m = std::min(train_cfg.batch_size, order.size() - ofs);
            std::vector<std::size_t> rows(order.begin() + static_cast<std::ptrdiff_t>(ofs),
                                          order.begin() + static_cast<std::ptrdiff_t>(ofs + m));
            std::vector<int> labels(m);
            for (std::size_t i = 0; i < m; ++i) labels[i] = data.labels[rows[i]];

            const double loss = loss_and_grad(model, data.gather(rows), labels);
            if (!std::isfinite(loss))
                throw TrainingDivergenceError(
                    "train: non-finite loss in epoch " + std::to_string(epoch) + ", batch " +
                        std::to_string(batches),
                    batches);
            adam.step();
            loss_sum += loss;
            ++batches;
        }

        EpochStats stats;
        stats.train_loss = loss_sum / static_cast<double>(batches);
        stats.train_accuracy = evaluate(model, data, split.train).accuracy;
        stats.val_accuracy = evaluate(model, data, split.val).accuracy;
        report.epochs.push_back(stats);

        if (train_cfg.early_stop_patience) {
            if (stats.val_accuracy > best_val) {
                best_val = stats.val_accuracy;
                since_best = 0;
            } else if (++since_best >= *train_cfg.early_stop_patience) {
                report.early_stop_reason =
                    "validation accuracy stalled for " + std::to_string(since_best) + " epochs";
                break;
            }
        }
    }

    const EvalResult test = evaluate(model, data, split.test);
    report.test_accuracy = test.accuracy;
    report.confusion = test.confusion;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (trained_out) trained_out->emplace(std::move(model));
    return report;
}

}  // namespace bvpkit::nn
