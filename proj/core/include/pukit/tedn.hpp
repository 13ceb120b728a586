#pragma once

#include <optional>
#include <vector>

#include "pukit/dataset.hpp"
#include "pukit/model.hpp"
#include "pukit/mpe.hpp"
#include "pukit/train.hpp"

namespace pukit {

struct TEDNConfig {
    std::size_t warm_start_epochs = 20;  // W; cheap synthetic tasks converge fast
    BBEConfig bbe;
    double split_fraction = 0.8;  // train share of the train/holdout split
    TrainConfig train;
    std::size_t max_epochs = 100;  // post-warm-start epoch cap
};

struct TEDNEpochRow {
    int epoch = 0;      // 1-based, counting warm-start epochs first
    bool warm = false;  // during warm start the estimate is diagnostic only
    double alpha_raw = 0.0;
    double alpha_clamped = 0.0;  // clamp to [0, 1 - 1/n_u_train]; drives the discard
    double c_hat = 0.0;
    double train_error = 0.0;  // summed, on (train positives, retained unlabeled)
    std::optional<double> pvn_accuracy;
};

struct TEDNTrace {
    std::vector<TEDNEpochRow> rows;
    // > 25 consecutive post-warm epochs with raw estimate >= 1 (discard wants
    // to drop everything; typical early failure mode on hard tasks)
    bool stall_warning = false;
};

struct TEDNResult {
    MixtureEstimate estimate;  // mean of the last (up to) 10 post-warm clamped estimates
    TEDNTrace trace;
    int epochs_run = 0;  // post-warm epochs
};

// Alternating estimate/discard/train:
//   1. split positives and unlabeled (split_fraction, seeded);
//   2. W unweighted epochs on the train split, all unlabeled as negatives;
//   3. per epoch: estimate alpha on the re-scored holdout split, keep the
//      (1 - alpha) fraction of train unlabeled with the smallest scores, run
//      one unweighted epoch on (train positives, retained);
// until the train error converges (same 5-epoch window as cvir_train) or
// max_epochs. Holdout scores never feed training; train scores never feed the
// estimator. Hidden labels are not read.
// The model must be freshly initialized; it is trained in place.
TEDNResult tedn_train(Classifier& model, const PUDataset& data, const TEDNConfig& config,
                      const EpochObserver& observer = nullptr);

// Per-epoch accuracy (and estimate error where the trace has one) of saved
// model snapshots against a labeled evaluation set: positives are +1, the
// "unlabeled" side is scored against its ground-truth labels.
// throws UnsupportedOperationError when eval_set has no hidden labels
std::vector<ExperimentRecord> evaluate_epochwise(
    std::span<const std::unique_ptr<Classifier>> snapshots, const TEDNTrace& trace,
    const PUDataset& eval_set, double alpha_true, double threshold = 0.5);

// Accuracy of one model on a labeled set (see evaluate_epochwise).
double dataset_pvn_accuracy(const Classifier& model, const PUDataset& eval_set,
                            double threshold = 0.5);

// The seed tedn_train hands to split_pu (derived from config.train.seed), so
// other trajectories can reproduce the identical split for paired comparisons.
RandomSeed tedn_split_seed(const TEDNConfig& config);

}  // namespace pukit
