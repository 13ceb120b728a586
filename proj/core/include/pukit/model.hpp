#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pukit/dataset.hpp"
#include "pukit/random.hpp"

namespace pukit {

// Loss clamp: scores are clipped to [kLossEps, 1-kLossEps] inside the
// cross-entropy so that -log never sees 0. Gradients are zero on the clamp
// plateaus, matching what autodiff through a clamp would produce.
inline constexpr double kLossEps = 1e-7;

// Trainable scoring function f: R^d -> [0,1] with analytic cross-entropy
// gradients. Parameters are exposed as one flat vector in a fixed order so
// optimizers and serialization stay model-agnostic.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual std::size_t dim() const = 0;
    virtual std::size_t param_count() const = 0;
    virtual std::vector<double> parameters() const = 0;
    virtual void set_parameters(std::span<const double> p) = 0;

    virtual double score(std::span<const double> x) const = 0;

    // Computes z = score(x) and accumulates coeff * d/dtheta of the clamped
    // cross-entropy loss(z, label) into grad (flat, parameter order).
    // label is +1 or -1. Returns z.
    virtual double score_and_accumulate_ce_grad(std::span<const double> x, int label,
                                                double coeff, std::span<double> grad) const = 0;

    virtual std::unique_ptr<Classifier> clone() const = 0;
    virtual std::string kind() const = 0;

    std::vector<double> scores(std::span<const FeatureVector> xs) const {
        std::vector<double> out;
        out.reserve(xs.size());
        for (const auto& x : xs) out.push_back(score(x));
        return out;
    }
};

// score(x) = sigmoid(w.x + b)
class LogisticModel final : public Classifier {
public:
    // Symmetric uniform init scaled by fan-in/fan-out: w ~ U(+-sqrt(6/(d+1))), b = 0.
    LogisticModel(std::size_t dim, Rng& rng);
    LogisticModel(std::vector<double> weights, double bias);

    std::size_t dim() const override { return w_.size(); }
    std::size_t param_count() const override { return w_.size() + 1; }
    std::vector<double> parameters() const override;
    void set_parameters(std::span<const double> p) override;
    double score(std::span<const double> x) const override;
    double score_and_accumulate_ce_grad(std::span<const double> x, int label, double coeff,
                                        std::span<double> grad) const override;
    std::unique_ptr<Classifier> clone() const override;
    std::string kind() const override { return "logistic"; }

private:
    std::vector<double> w_;
    double b_ = 0.0;
};

// One hidden ReLU layer of H units, sigmoid output.
// Parameter layout: [W1 row-major (H x d), b1 (H), w2 (H), b2] -> (d+1)H + H + 1.
class MLPModel final : public Classifier {
public:
    MLPModel(std::size_t dim, std::size_t hidden, Rng& rng);

    std::size_t dim() const override { return d_; }
    std::size_t hidden() const { return h_; }
    std::size_t param_count() const override { return (d_ + 1) * h_ + h_ + 1; }
    std::vector<double> parameters() const override;
    void set_parameters(std::span<const double> p) override;
    double score(std::span<const double> x) const override;
    double score_and_accumulate_ce_grad(std::span<const double> x, int label, double coeff,
                                        std::span<double> grad) const override;
    std::unique_ptr<Classifier> clone() const override;
    std::string kind() const override { return "mlp"; }

private:
    std::size_t d_ = 0, h_ = 0;
    std::vector<double> w1_;  // H x d, row-major
    std::vector<double> b1_;  // H
    std::vector<double> w2_;  // H
    double b2_ = 0.0;
};

// JSON record: format tag, version, model kind, shape, ordered named real
// arrays. Round-trips exactly (doubles serialized with max precision).
void save_model(const Classifier& model, const std::string& path);
std::unique_ptr<Classifier> load_model(const std::string& path);

}  // namespace pukit
