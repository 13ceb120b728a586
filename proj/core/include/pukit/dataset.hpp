#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pukit/random.hpp"

namespace pukit {

using FeatureVector = std::vector<double>;

// Labels of unlabeled samples are ground truth kept for evaluation only.
// Estimation and training code receives features (or scores) and never this
// type; the accessors below are the single, auditable leak point.
class HiddenLabels {
public:
    HiddenLabels() = default;
    explicit HiddenLabels(std::vector<std::int8_t> labels) : labels_(std::move(labels)) {}

    bool present() const { return !labels_.empty(); }
    std::size_t size() const { return labels_.size(); }
    const std::vector<std::int8_t>& for_evaluation() const { return labels_; }

private:
    std::vector<std::int8_t> labels_;  // +1 / -1, aligned with unlabeled
};

struct PUDataset {
    std::vector<FeatureVector> positives;
    std::vector<FeatureVector> unlabeled;
    HiddenLabels hidden_labels;                // optional, evaluation only
    std::optional<double> alpha_true;

    std::size_t n_p() const { return positives.size(); }
    std::size_t n_u() const { return unlabeled.size(); }
    std::size_t dim() const { return positives.empty() ? (unlabeled.empty() ? 0 : unlabeled[0].size()) : positives[0].size(); }

    // throws InvalidInputError on dimension mismatch, non-finite entries,
    // misaligned hidden labels, or alpha_true outside [0,1]
    void validate() const;
};

struct TrainHoldoutSplit {
    PUDataset train;    // the larger share
    PUDataset holdout;
    double split_fraction = 0.8;
};

// Per-epoch metrics row, the unit of all CSV output.
struct ExperimentRecord {
    std::string method;
    std::uint64_t seed = 0;
    int epoch = 0;
    double alpha_true = 0.0;
    double alpha_hat = 0.0;
    double abs_err = 0.0;
    double train_error = 0.0;     // summed positive+negative error rates, in [0,2]
    double pvn_accuracy = 0.0;
};

// Random disjoint partition; train gets floor(fraction * n) of each side,
// clamped so both parts stay nonempty. Hidden labels follow their samples.
TrainHoldoutSplit split_pu(const PUDataset& data, double fraction, RandomSeed seed);

// Fraction of sign-consistent predictions: +1 with score > threshold, or -1
// with score <= threshold. Scores equal to the threshold predict -1.
double pvn_accuracy(std::span<const double> scores, std::span<const std::int8_t> labels,
                    double threshold = 0.5);

}  // namespace pukit
