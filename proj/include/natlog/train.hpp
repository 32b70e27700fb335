#pragma once

#include <cmath>
#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "natlog/dataset_io.hpp"
#include "natlog/metrics.hpp"
#include "natlog/models.hpp"
#include "natlog/nn.hpp"

namespace natlog {

// Per-parameter AdaDelta state, shaped like the model parameters.
class AdaDeltaOptimizer {
 public:
  AdaDeltaOptimizer(const ModelConfig& cfg, AdaDeltaHyper hyper = {})
      : hyper_(hyper),
        grad_sq_(ModelParams::zeros(cfg)),
        update_sq_(ModelParams::zeros(cfg)) {}

  void step(ModelParams& params, ModelParams& grads) {
    auto pv = params.views();
    auto gv = grads.views();
    auto sv = grad_sq_.views();
    auto uv = update_sq_.views();
    for (std::size_t i = 0; i < pv.size(); ++i)
      adadelta_step(pv[i].data, gv[i].data, sv[i].data, uv[i].data, pv[i].size,
                    hyper_);
  }

  const AdaDeltaHyper& hyper() const { return hyper_; }
  ModelParams& grad_sq() { return grad_sq_; }
  ModelParams& update_sq() { return update_sq_; }

 private:
  AdaDeltaHyper hyper_;
  ModelParams grad_sq_;
  ModelParams update_sq_;
};

struct LabeledExample {
  int label = 0;
  CompiledTree left;
  CompiledTree right;
};

inline std::vector<LabeledExample> compile_dataset(
    const std::vector<LabeledPair>& pairs, const PairModel& model) {
  std::vector<LabeledExample> out;
  out.reserve(pairs.size());
  for (const LabeledPair& p : pairs)
    out.push_back({static_cast<int>(p.label),
                   compile_expression(*p.left, model),
                   compile_expression(*p.right, model)});
  return out;
}

inline Metrics evaluate_model(const PairModel& model,
                              const std::vector<LabeledExample>& data) {
  std::vector<int> gold, predicted;
  gold.reserve(data.size());
  predicted.reserve(data.size());
  for (const LabeledExample& ex : data) {
    gold.push_back(ex.label);
    predicted.push_back(classify_pair(model, ex.left, ex.right).argmax());
  }
  return compute_metrics(gold, predicted, model.config.num_labels);
}

struct NonFiniteLossError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainConfig {
  int epochs = 200;
  int minibatch_size = 32;
  std::uint64_t seed = 1;
  double dev_fraction = 0.1;  // held out from the training data
  int eval_every = 1;         // epochs between dev evaluations
  int patience = 20;          // evaluations without improvement before stopping
  bool restore_best = true;
  bool verbose = false;
  AdaDeltaHyper adadelta;
};

struct EpochRecord {
  int epoch = 0;
  double mean_loss = 0.0;
  double dev_accuracy = -1.0;  // -1 when not evaluated this epoch
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  int epochs_run = 0;
  double best_dev_accuracy = -1.0;
  int best_epoch = -1;
};

// Shuffled minibatch SGD with AdaDelta learning rates. Gradients are summed
// over the minibatch and mean-normalized before the update; the L2 gradient
// is added once per batch. The serial path is bitwise deterministic for a
// fixed seed.
inline TrainLog train_model(PairModel& model, std::vector<LabeledExample> data,
                            const TrainConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("empty training set");
  if (cfg.epochs < 1 || cfg.minibatch_size < 1)
    throw std::invalid_argument("epochs and minibatch_size must be positive");
  Rng rng(cfg.seed);
  rng.shuffle(data);
  const std::size_t dev_size =
      cfg.patience > 0
          ? static_cast<std::size_t>(cfg.dev_fraction *
                                     static_cast<double>(data.size()))
          : 0;
  const std::vector<LabeledExample> dev(data.begin(),
                                        data.begin() + static_cast<std::ptrdiff_t>(dev_size));
  std::vector<LabeledExample> train(data.begin() + static_cast<std::ptrdiff_t>(dev_size),
                                    data.end());
  if (train.empty()) throw std::invalid_argument("dev split leaves no training data");

  AdaDeltaOptimizer optimizer(model.config, cfg.adadelta);
  ModelParams grads = ModelParams::zeros(model.config);
  ModelParams best = model.params;
  TrainLog log;
  int patience_left = cfg.patience;

  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t pos = 0;
    while (pos < order.size()) {
      const std::size_t batch_end =
          std::min(order.size(), pos + static_cast<std::size_t>(cfg.minibatch_size));
      grads.set_zero();
      for (std::size_t b = pos; b < batch_end; ++b) {
        const LabeledExample& ex = train[order[b]];
        const PairTrace trace =
            forward_pair(model, ex.left, ex.right, /*train_mode=*/true, &rng);
        const double nll = softmax_nll(trace.logits, ex.label).loss;
        if (!std::isfinite(nll))
          throw NonFiniteLossError("non-finite loss at epoch " +
                                   std::to_string(epoch));
        loss_sum += nll;
        backward_pair(model, ex.left, ex.right, trace, ex.label, grads);
      }
      grads.scale(1.0 / static_cast<double>(batch_end - pos));
      add_l2_gradient(grads, model.params, model.config);
      optimizer.step(model.params, grads);
      pos = batch_end;
    }

    EpochRecord record;
    record.epoch = epoch;
    record.mean_loss = loss_sum / static_cast<double>(train.size());
    if (!dev.empty() && epoch % cfg.eval_every == 0) {
      record.dev_accuracy = evaluate_model(model, dev).accuracy;
      if (record.dev_accuracy > log.best_dev_accuracy) {
        log.best_dev_accuracy = record.dev_accuracy;
        log.best_epoch = epoch;
        best = model.params;
        patience_left = cfg.patience;
      } else {
        patience_left -= 1;
      }
    }
    if (cfg.verbose) {
      std::cerr << "epoch " << epoch << " loss " << record.mean_loss;
      if (record.dev_accuracy >= 0.0)
        std::cerr << " dev " << record.dev_accuracy;
      std::cerr << '\n';
    }
    log.epochs.push_back(record);
    log.epochs_run = epoch;
    if (!dev.empty() && patience_left <= 0) break;
  }
  if (!dev.empty() && cfg.restore_best && log.best_epoch > 0)
    model.params = best;
  return log;
}

}  // namespace natlog
