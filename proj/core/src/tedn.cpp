#include "pukit/tedn.hpp"

#include <algorithm>
#include <cmath>

#include "pukit/errors.hpp"

namespace pukit {

namespace {

constexpr std::size_t kConvergenceWindow = 5;
constexpr double kConvergenceTol = 1e-4;
constexpr int kStallEpochs = 25;
constexpr std::uint64_t kSplitTag = 0x5454;  // keeps the split stream apart from training

bool error_converged(const std::vector<double>& errors, std::size_t window, double tol) {
    if (errors.size() < window) return false;
    auto [lo, hi] = std::minmax_element(errors.end() - static_cast<std::ptrdiff_t>(window),
                                        errors.end());
    return (*hi - *lo) < tol;
}

}  // namespace

RandomSeed tedn_split_seed(const TEDNConfig& config) {
    return Rng::derive(config.train.seed, kSplitTag);
}

TEDNResult tedn_train(Classifier& model, const PUDataset& data, const TEDNConfig& config,
                      const EpochObserver& observer) {
    if (data.positives.empty() || data.unlabeled.empty()) {
        throw InvalidInputError("tedn: both positive and unlabeled samples are required");
    }

    const auto split = split_pu(data, config.split_fraction, tedn_split_seed(config));
    const auto& pos_train = split.train.positives;
    const auto& unl_train = split.train.unlabeled;
    const auto& pos_hold = split.holdout.positives;
    const auto& unl_hold = split.holdout.unlabeled;

    Rng rng(config.train.seed);
    MomentumSgd opt(model.param_count());

    TEDNResult res;
    int epoch = 0;

    const auto holdout_estimate = [&]() {
        return bbe_estimate(model.scores(pos_hold), model.scores(unl_hold), config.bbe);
    };
    // keep at least one unlabeled sample trainable
    const double alpha_cap = 1.0 - 1.0 / static_cast<double>(unl_train.size());

    // warm start: domain discrimination on the full train split, no discarding;
    // the estimate is recorded as a diagnostic only
    for (std::size_t w = 0; w < config.warm_start_epochs; ++w) {
        sgd_epoch(model, pos_train, unl_train, 1.0, 1.0, config.train, rng, opt);
        const auto est = holdout_estimate();
        TEDNEpochRow row;
        row.epoch = ++epoch;
        row.warm = true;
        row.alpha_raw = est.alpha_hat;
        row.alpha_clamped = std::clamp(est.alpha_hat, 0.0, alpha_cap);
        row.c_hat = est.c_hat;
        row.train_error = train_error(model, pos_train, unl_train, config.train.threshold);
        res.trace.rows.push_back(row);
        if (observer) observer(epoch, model, row.train_error);
    }

    MixtureEstimate last_est;
    std::vector<double> main_errors;
    std::vector<double> main_alphas;
    int stall_run = 0;
    std::vector<FeatureVector> retained;
    for (std::size_t m = 0; m < config.max_epochs; ++m) {
        // estimate on the re-scored holdout, never on training scores
        last_est = holdout_estimate();
        const double alpha_raw = last_est.alpha_hat;
        const double alpha = std::clamp(alpha_raw, 0.0, alpha_cap);

        if (alpha_raw >= 1.0) {
            if (++stall_run > kStallEpochs) res.trace.stall_warning = true;
        } else {
            stall_run = 0;
        }

        const auto kept = rank_and_discard(model, unl_train, 1.0 - alpha);
        retained.clear();
        retained.reserve(kept.size());
        for (std::size_t i : kept) retained.push_back(unl_train[i]);

        sgd_epoch(model, pos_train, retained, 1.0, 1.0, config.train, rng, opt);

        TEDNEpochRow row;
        row.epoch = ++epoch;
        row.alpha_raw = alpha_raw;
        row.alpha_clamped = alpha;
        row.c_hat = last_est.c_hat;
        row.train_error = train_error(model, pos_train, retained, config.train.threshold);
        res.trace.rows.push_back(row);
        main_errors.push_back(row.train_error);
        main_alphas.push_back(alpha);
        res.epochs_run = static_cast<int>(m) + 1;
        if (observer) observer(epoch, model, row.train_error);

        if (error_converged(main_errors, kConvergenceWindow, kConvergenceTol)) break;
    }

    // report the mean of the last (up to) 10 estimates actually used
    res.estimate = last_est;
    res.estimate.method = "tedn";
    if (!main_alphas.empty()) {
        const std::size_t k = std::min<std::size_t>(10, main_alphas.size());
        double sum = 0.0;
        for (std::size_t i = main_alphas.size() - k; i < main_alphas.size(); ++i) {
            sum += main_alphas[i];
        }
        res.estimate.alpha_hat = sum / static_cast<double>(k);
        res.estimate.alpha_clamped = res.estimate.alpha_hat;
    }
    return res;
}

double dataset_pvn_accuracy(const Classifier& model, const PUDataset& eval_set, double threshold) {
    if (!eval_set.unlabeled.empty() && !eval_set.hidden_labels.present()) {
        throw UnsupportedOperationError("pvn accuracy needs ground-truth labels on the eval set");
    }
    std::vector<double> scores;
    std::vector<std::int8_t> labels;
    scores.reserve(eval_set.n_p() + eval_set.n_u());
    labels.reserve(scores.capacity());
    for (const auto& x : eval_set.positives) {
        scores.push_back(model.score(x));
        labels.push_back(1);
    }
    const auto& hidden = eval_set.hidden_labels.for_evaluation();
    for (std::size_t i = 0; i < eval_set.n_u(); ++i) {
        scores.push_back(model.score(eval_set.unlabeled[i]));
        labels.push_back(hidden[i]);
    }
    return pvn_accuracy(scores, labels, threshold);
}

std::vector<ExperimentRecord> evaluate_epochwise(
    std::span<const std::unique_ptr<Classifier>> snapshots, const TEDNTrace& trace,
    const PUDataset& eval_set, double alpha_true, double threshold) {
    if (!eval_set.hidden_labels.present() && !eval_set.unlabeled.empty()) {
        throw UnsupportedOperationError("evaluate_epochwise needs a labeled eval set");
    }
    std::vector<ExperimentRecord> records;
    records.reserve(snapshots.size());
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        ExperimentRecord r;
        r.method = "epochwise";
        r.epoch = static_cast<int>(i) + 1;
        r.alpha_true = alpha_true;
        if (i < trace.rows.size()) {
            r.alpha_hat = trace.rows[i].alpha_clamped;
            r.abs_err = std::abs(r.alpha_hat - alpha_true);
            r.train_error = trace.rows[i].train_error;
        }
        r.pvn_accuracy = dataset_pvn_accuracy(*snapshots[i], eval_set, threshold);
        records.push_back(r);
    }
    return records;
}

}  // namespace pukit
