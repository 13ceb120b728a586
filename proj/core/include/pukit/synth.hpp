#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pukit/dataset.hpp"
#include "pukit/random.hpp"

namespace pukit {

enum class TaskKind { gaussian, triangle, anchor, custom_score };

TaskKind task_kind_from_string(const std::string& s);  // throws SchemaError
std::string to_string(TaskKind k);

// Everything needed to regenerate a synthetic task from (spec, seed).
struct TaskSpec {
    TaskKind kind = TaskKind::gaussian;
    std::size_t dim = 2;  // gaussian only; triangle is 2-D, anchor/custom 1-D

    // gaussian: isotropic normals around two means
    std::vector<double> mean_pos{1.0, 0.0};
    std::vector<double> mean_neg{-1.0, 0.0};
    double sigma = 1.0;

    // anchor: positives put gamma_margin mass on U[2,3] (disjoint from the
    // negatives' U[0,1] support), the rest on U[0,1]
    double gamma_margin = 0.3;

    // custom_score: features are scores already; uniform bands inside [0,1]
    double score_pos_lo = 0.5, score_pos_hi = 1.0;
    double score_neg_lo = 0.0, score_neg_hi = 0.5;

    double alpha = 0.5;
    std::size_t n_p = 1000;
    std::size_t n_u = 1000;
    RandomSeed seed = 1;
};

using Sampler = std::function<FeatureVector(Rng&)>;

// Each unlabeled sample is independently positive with probability alpha;
// the true label is recorded alongside.
std::pair<std::vector<FeatureVector>, HiddenLabels> sample_unlabeled(
    const Sampler& pos_sampler, const Sampler& neg_sampler, double alpha, std::size_t n,
    Rng& rng);

// positives ~ N(mean_pos, sigma^2 I), negatives ~ N(mean_neg, sigma^2 I).
// The optimal PvN accuracy is Phi(|mean_pos - mean_neg| / (2 sigma)).
// throws InvalidInputError when sigma <= 0 or the means disagree in dimension
PUDataset gen_gaussian_task(const TaskSpec& spec);

// Positives uniform in the triangle {(-1, 0.1), (0, 4), (1, 0.1)}, negatives
// uniform in {(-1, -0.1), (4, -4), (1, -0.1)}; classes separated by the x-axis.
PUDataset gen_triangle_task(std::size_t n_p, std::size_t n_u, double alpha, RandomSeed seed);

// 1-D: negatives ~ U[0,1]; positives ~ gamma_margin * U[2,3] + (1-gamma_margin) * U[0,1].
// Every threshold inside [2,3] bounds a bin containing no negatives, for any
// monotone scorer.
// throws InvalidInputError when gamma_margin is outside (0,1]
PUDataset gen_anchor_task(double gamma_margin, double alpha, std::size_t n_p, std::size_t n_u,
                          RandomSeed seed);

// 1-D scores drawn from the spec.score_* uniform bands.
PUDataset gen_custom_score_task(const TaskSpec& spec);

PUDataset generate_task(const TaskSpec& spec);  // dispatch on spec.kind

// Labeled evaluation set from the same distributions: n per class, positives
// in .positives, negatives in .unlabeled with hidden labels all -1.
PUDataset generate_eval_set(const TaskSpec& spec, std::size_t n_per_class, RandomSeed seed);

// Phi(|mean_pos - mean_neg| / (2 sigma)) for gaussian specs.
double gaussian_bayes_accuracy(const TaskSpec& spec);

}  // namespace pukit
