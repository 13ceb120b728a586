#include "pukit/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pukit/errors.hpp"

namespace pukit {

double ce_loss(double score, int label) {
    const double z = std::clamp(score, kLossEps, 1.0 - kLossEps);
    return label > 0 ? -std::log(z) : -std::log(1.0 - z);
}

namespace {

double mean_loss(const Classifier& model, std::span<const FeatureVector> batch, int label) {
    if (batch.empty()) throw InvalidInputError("loss over an empty batch");
    double total = 0.0;
    for (const auto& x : batch) total += ce_loss(model.score(x), label);
    return total / static_cast<double>(batch.size());
}

}  // namespace

double loss_pos(const Classifier& model, std::span<const FeatureVector> batch) {
    return mean_loss(model, batch, +1);
}

double loss_neg(const Classifier& model, std::span<const FeatureVector> batch) {
    return mean_loss(model, batch, -1);
}

double train_error(const Classifier& model, std::span<const FeatureVector> pos,
                   std::span<const FeatureVector> neg, double threshold) {
    if (pos.empty() && neg.empty()) throw InvalidInputError("train_error: both sets empty");
    double err = 0.0;
    if (!pos.empty()) {
        std::size_t wrong = 0;
        for (const auto& x : pos) {
            if (model.score(x) <= threshold) ++wrong;  // a tie counts against +1
        }
        err += static_cast<double>(wrong) / static_cast<double>(pos.size());
    }
    if (!neg.empty()) {
        std::size_t wrong = 0;
        for (const auto& x : neg) {
            if (model.score(x) > threshold) ++wrong;
        }
        err += static_cast<double>(wrong) / static_cast<double>(neg.size());
    }
    return err;
}

void MomentumSgd::step(Classifier& model, std::span<const double> grad,
                       const TrainConfig& config) {
    auto params = model.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grad[i] + config.weight_decay * params[i];
        velocity_[i] = config.momentum * velocity_[i] + g;
        params[i] -= config.learning_rate * velocity_[i];
    }
    model.set_parameters(params);
}

namespace {

// contiguous chunks of a shuffled index permutation
struct Chunks {
    std::vector<std::size_t> perm;
    std::size_t batch = 1;
    std::size_t count() const {
        return perm.empty() ? 0 : (perm.size() + batch - 1) / batch;
    }
    std::span<const std::size_t> chunk(std::size_t i) const {
        const std::size_t lo = i * batch;
        const std::size_t hi = std::min(lo + batch, perm.size());
        return {perm.data() + lo, hi - lo};
    }
};

}  // namespace

void sgd_epoch(Classifier& model, std::span<const FeatureVector> pos,
               std::span<const FeatureVector> neg, double w_pos, double w_neg,
               const TrainConfig& config, Rng& rng, MomentumSgd& opt) {
    if (pos.empty() && neg.empty()) throw InvalidInputError("sgd_epoch: both sets empty");
    if (config.batch_size == 0) throw InvalidInputError("sgd_epoch: batch_size must be >= 1");

    Chunks cp{rng.permutation(pos.size()), config.batch_size};
    Chunks cn{rng.permutation(neg.size()), config.batch_size};
    const std::size_t steps = std::max(cp.count(), cn.count());

    std::vector<double> grad(model.param_count());
    for (std::size_t s = 0; s < steps; ++s) {
        std::fill(grad.begin(), grad.end(), 0.0);
        if (cp.count() > 0) {
            const auto b = cp.chunk(s % cp.count());
            const double coeff = w_pos / static_cast<double>(b.size());
            for (std::size_t i : b) model.score_and_accumulate_ce_grad(pos[i], +1, coeff, grad);
        }
        if (cn.count() > 0) {
            const auto b = cn.chunk(s % cn.count());
            const double coeff = w_neg / static_cast<double>(b.size());
            for (std::size_t i : b) model.score_and_accumulate_ce_grad(neg[i], -1, coeff, grad);
        }
        for (double g : grad) {
            if (!std::isfinite(g)) {
                throw TrainingDivergenceError("non-finite gradient at step " + std::to_string(s));
            }
        }
        opt.step(model, grad, config);
    }
}

std::vector<std::size_t> rank_and_discard(const Classifier& model,
                                          std::span<const FeatureVector> unlabeled,
                                          double keep_fraction) {
    if (!(keep_fraction >= 0.0 && keep_fraction <= 1.0)) {
        throw InvalidInputError("rank_and_discard: keep_fraction outside [0,1]");
    }
    const std::size_t n = unlabeled.size();
    const auto k = static_cast<std::size_t>(
        std::floor(keep_fraction * static_cast<double>(n)));
    if (k == 0) return {};

    // the negative-label loss -log(1 - z) is increasing in the score, so
    // ranking by score is ranking by loss
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) scores[i] = model.score(unlabeled[i]);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

namespace {

// max - min of the trailing window moved less than tol
bool error_converged(const std::vector<double>& errors, std::size_t window, double tol) {
    if (errors.size() < window) return false;
    auto [lo, hi] = std::minmax_element(errors.end() - static_cast<std::ptrdiff_t>(window),
                                        errors.end());
    return (*hi - *lo) < tol;
}

constexpr std::size_t kConvergenceWindow = 5;
constexpr double kConvergenceTol = 1e-4;

}  // namespace

CvirResult cvir_train(Classifier& model, std::span<const FeatureVector> positives,
                      std::span<const FeatureVector> unlabeled, double alpha,
                      const TrainConfig& config, bool weighted, const EpochObserver& observer) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInputError("cvir: alpha outside [0,1]");
    if (positives.empty()) throw InvalidInputError("cvir: no positive samples");

    Rng rng(config.seed);
    MomentumSgd opt(model.param_count());
    const double w_pos = weighted ? alpha : 1.0;
    const double w_neg = weighted ? 1.0 - alpha : 1.0;

    CvirResult res;
    std::vector<FeatureVector> retained;
    for (std::size_t e = 0; e < config.epochs; ++e) {
        const auto kept = rank_and_discard(model, unlabeled, 1.0 - alpha);
        retained.clear();
        retained.reserve(kept.size());
        for (std::size_t i : kept) retained.push_back(unlabeled[i]);

        sgd_epoch(model, positives, retained, w_pos, w_neg, config, rng, opt);

        const double err = train_error(model, positives, retained, config.threshold);
        res.train_errors.push_back(err);
        res.epochs_run = static_cast<int>(e) + 1;
        if (observer) observer(res.epochs_run, model, err);
        if (error_converged(res.train_errors, kConvergenceWindow, kConvergenceTol)) {
            res.converged = true;
            break;
        }
    }
    return res;
}

void pvu_warm_start(Classifier& model, std::span<const FeatureVector> positives,
                    std::span<const FeatureVector> unlabeled, std::size_t warm_epochs,
                    const TrainConfig& config, const EpochObserver& observer) {
    Rng rng(config.seed);
    MomentumSgd opt(model.param_count());
    for (std::size_t e = 0; e < warm_epochs; ++e) {
        sgd_epoch(model, positives, unlabeled, 1.0, 1.0, config, rng, opt);
        if (observer) {
            observer(static_cast<int>(e) + 1, model,
                     train_error(model, positives, unlabeled, config.threshold));
        }
    }
}

}  // namespace pukit
