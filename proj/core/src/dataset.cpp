#include "pukit/dataset.hpp"

#include <cmath>

#include "pukit/errors.hpp"

namespace pukit {

void PUDataset::validate() const {
    if (positives.empty() && unlabeled.empty()) {
        throw InvalidInputError("dataset has no samples");
    }
    const std::size_t d = dim();
    for (const auto& x : positives) {
        if (x.size() != d) throw InvalidInputError("positive sample dimension mismatch");
        for (double v : x) {
            if (!std::isfinite(v)) throw InvalidInputError("non-finite feature value");
        }
    }
    for (const auto& x : unlabeled) {
        if (x.size() != d) throw InvalidInputError("unlabeled sample dimension mismatch");
        for (double v : x) {
            if (!std::isfinite(v)) throw InvalidInputError("non-finite feature value");
        }
    }
    if (hidden_labels.present() && hidden_labels.size() != unlabeled.size()) {
        throw InvalidInputError("hidden labels misaligned with unlabeled samples");
    }
    if (alpha_true && (*alpha_true < 0.0 || *alpha_true > 1.0)) {
        throw InvalidInputError("alpha_true outside [0,1]");
    }
}

namespace {

// floor(fraction * n), kept inside [1, n-1] so both parts stay nonempty
std::size_t train_count(std::size_t n, double fraction) {
    auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    if (k < 1) k = 1;
    if (k > n - 1) k = n - 1;
    return k;
}

}  // namespace

TrainHoldoutSplit split_pu(const PUDataset& data, double fraction, RandomSeed seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw InvalidInputError("split fraction must lie in (0,1)");
    }
    if (data.n_p() < 2 || data.n_u() < 2) {
        throw InvalidInputError("split needs at least 2 samples on each side");
    }

    Rng rng(seed);
    const auto perm_p = rng.permutation(data.n_p());
    const auto perm_u = rng.permutation(data.n_u());
    const std::size_t kp = train_count(data.n_p(), fraction);
    const std::size_t ku = train_count(data.n_u(), fraction);

    TrainHoldoutSplit out;
    out.split_fraction = fraction;
    out.train.alpha_true = data.alpha_true;
    out.holdout.alpha_true = data.alpha_true;

    for (std::size_t i = 0; i < data.n_p(); ++i) {
        auto& dst = (i < kp) ? out.train.positives : out.holdout.positives;
        dst.push_back(data.positives[perm_p[i]]);
    }

    const bool labeled = data.hidden_labels.present();
    std::vector<std::int8_t> lab_train, lab_holdout;
    for (std::size_t i = 0; i < data.n_u(); ++i) {
        const std::size_t src = perm_u[i];
        if (i < ku) {
            out.train.unlabeled.push_back(data.unlabeled[src]);
            if (labeled) lab_train.push_back(data.hidden_labels.for_evaluation()[src]);
        } else {
            out.holdout.unlabeled.push_back(data.unlabeled[src]);
            if (labeled) lab_holdout.push_back(data.hidden_labels.for_evaluation()[src]);
        }
    }
    if (labeled) {
        out.train.hidden_labels = HiddenLabels(std::move(lab_train));
        out.holdout.hidden_labels = HiddenLabels(std::move(lab_holdout));
    }
    return out;
}

double pvn_accuracy(std::span<const double> scores, std::span<const std::int8_t> labels,
                    double threshold) {
    if (scores.size() != labels.size()) {
        throw InvalidInputError("pvn_accuracy: scores and labels differ in length");
    }
    if (scores.empty()) throw InvalidInputError("pvn_accuracy: empty input");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predict_pos = scores[i] > threshold;  // ties predict -1
        if (predict_pos == (labels[i] > 0)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(scores.size());
}

}  // namespace pukit
