#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pukit/dataset.hpp"
#include "pukit/model.hpp"
#include "pukit/random.hpp"

namespace pukit {

struct TrainConfig {
    double learning_rate = 0.05;
    double momentum = 0.9;
    double weight_decay = 0.0005;
    std::size_t batch_size = 64;
    std::size_t epochs = 100;
    double threshold = 0.5;  // classification threshold for error/accuracy
    RandomSeed seed = 1;
};

// Clamped cross-entropy, mean over the batch.
// loss(z, +1) = -log(clamp(z)), loss(z, -1) = -log(1 - clamp(z)).
// throws InvalidInputError on an empty batch
double loss_pos(const Classifier& model, std::span<const FeatureVector> batch);
double loss_neg(const Classifier& model, std::span<const FeatureVector> batch);

double ce_loss(double score, int label);

// Summed 0-1 error: mean over pos of 1{score <= t}  +  mean over neg of
// 1{score > t}. A score equal to t predicts -1. Range [0, 2]. One side may be
// empty (contributes 0); both empty is an error.
double train_error(const Classifier& model, std::span<const FeatureVector> pos,
                   std::span<const FeatureVector> neg, double threshold = 0.5);

// Momentum SGD with decoupled-from-nothing classic weight decay, PyTorch
// convention: g = grad + wd * theta; v = mu * v + g; theta -= lr * v.
// The velocity buffer persists across epochs of one training run.
class MomentumSgd {
public:
    explicit MomentumSgd(std::size_t param_count) : velocity_(param_count, 0.0) {}
    void step(Classifier& model, std::span<const double> grad, const TrainConfig& config);

private:
    std::vector<double> velocity_;
};

// One full pass of minibatch SGD on the weighted objective
//   w_pos * mean-loss(pos batch, +1) + w_neg * mean-loss(neg batch, -1).
// Each set is shuffled once per epoch from rng and cut into batch_size chunks;
// step i pairs positive chunk i mod #pos_chunks with negative chunk
// i mod #neg_chunks, for max(#pos_chunks, #neg_chunks) steps. An empty side
// simply drops its term.
// throws TrainingDivergenceError (naming the step) on non-finite gradients
void sgd_epoch(Classifier& model, std::span<const FeatureVector> pos,
               std::span<const FeatureVector> neg, double w_pos, double w_neg,
               const TrainConfig& config, Rng& rng, MomentumSgd& opt);

// Indices of the floor(keep_fraction * n) unlabeled samples with the smallest
// negative-label loss (equivalently, smallest scores). Ties break toward the
// smaller original index; the result is sorted ascending by index.
std::vector<std::size_t> rank_and_discard(const Classifier& model,
                                          std::span<const FeatureVector> unlabeled,
                                          double keep_fraction);

// Called after every completed epoch of a training loop.
using EpochObserver = std::function<void(int epoch, const Classifier& model, double train_error)>;

struct CvirResult {
    int epochs_run = 0;
    std::vector<double> train_errors;  // summed, one per epoch
    bool converged = false;
};

// Iterative loss-truncation training with known mixture proportion alpha:
// per epoch, keep the (1-alpha) fraction of unlabeled with the smallest
// negative-label loss under the current model, then run one sgd_epoch on
// (positives, retained) — weighted (alpha, 1-alpha) by default, (1, 1) when
// weighted is false. Stops when the summed train error over a trailing
// 5-epoch window moves less than 1e-4, or at config.epochs. No early stopping
// beyond that convergence test.
CvirResult cvir_train(Classifier& model, std::span<const FeatureVector> positives,
                      std::span<const FeatureVector> unlabeled, double alpha,
                      const TrainConfig& config, bool weighted = true,
                      const EpochObserver& observer = nullptr);

// W unweighted epochs treating every unlabeled sample as negative. W = 0
// leaves the freshly initialized model untouched. Bit-identical to
// cvir_train(alpha = 0, weighted = false) under equal seeds.
void pvu_warm_start(Classifier& model, std::span<const FeatureVector> positives,
                    std::span<const FeatureVector> unlabeled, std::size_t warm_epochs,
                    const TrainConfig& config, const EpochObserver& observer = nullptr);

}  // namespace pukit
