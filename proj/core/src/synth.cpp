#include "pukit/synth.hpp"

#include <array>
#include <cmath>

#include "pukit/errors.hpp"

namespace pukit {

TaskKind task_kind_from_string(const std::string& s) {
    if (s == "gaussian") return TaskKind::gaussian;
    if (s == "triangle") return TaskKind::triangle;
    if (s == "anchor") return TaskKind::anchor;
    if (s == "custom_score" || s == "custom-score") return TaskKind::custom_score;
    throw SchemaError("unknown task kind '" + s + "'");
}

std::string to_string(TaskKind k) {
    switch (k) {
        case TaskKind::gaussian: return "gaussian";
        case TaskKind::triangle: return "triangle";
        case TaskKind::anchor: return "anchor";
        case TaskKind::custom_score: return "custom_score";
    }
    return "?";
}

std::pair<std::vector<FeatureVector>, HiddenLabels> sample_unlabeled(
    const Sampler& pos_sampler, const Sampler& neg_sampler, double alpha, std::size_t n,
    Rng& rng) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInputError("alpha outside [0,1]");
    std::vector<FeatureVector> xs;
    std::vector<std::int8_t> labels;
    xs.reserve(n);
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool positive = rng.bernoulli(alpha);
        xs.push_back(positive ? pos_sampler(rng) : neg_sampler(rng));
        labels.push_back(positive ? std::int8_t{1} : std::int8_t{-1});
    }
    return {std::move(xs), HiddenLabels(std::move(labels))};
}

namespace {

PUDataset assemble(const Sampler& pos, const Sampler& neg, double alpha, std::size_t n_p,
                   std::size_t n_u, RandomSeed seed) {
    Rng rng(seed);
    PUDataset out;
    out.alpha_true = alpha;
    out.positives.reserve(n_p);
    for (std::size_t i = 0; i < n_p; ++i) out.positives.push_back(pos(rng));
    auto [xs, labels] = sample_unlabeled(pos, neg, alpha, n_u, rng);
    out.unlabeled = std::move(xs);
    out.hidden_labels = std::move(labels);
    return out;
}

Sampler gaussian_sampler(std::vector<double> mean, double sigma) {
    return [mean = std::move(mean), sigma](Rng& rng) {
        FeatureVector x(mean.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = mean[i] + sigma * rng.normal();
        return x;
    };
}

// uniform point in a triangle via the reflected-barycentric construction
Sampler triangle_sampler(std::array<std::array<double, 2>, 3> v) {
    return [v](Rng& rng) {
        double u = rng.uniform();
        double w = rng.uniform();
        if (u + w > 1.0) {
            u = 1.0 - u;
            w = 1.0 - w;
        }
        return FeatureVector{v[0][0] + u * (v[1][0] - v[0][0]) + w * (v[2][0] - v[0][0]),
                             v[0][1] + u * (v[1][1] - v[0][1]) + w * (v[2][1] - v[0][1])};
    };
}

constexpr std::array<std::array<double, 2>, 3> kPosTriangle{{{-1.0, 0.1}, {0.0, 4.0}, {1.0, 0.1}}};
constexpr std::array<std::array<double, 2>, 3> kNegTriangle{{{-1.0, -0.1}, {4.0, -4.0}, {1.0, -0.1}}};

Sampler anchor_pos_sampler(double gamma_margin) {
    return [gamma_margin](Rng& rng) {
        // anchor mass on U[2,3], disjoint from the negatives' support
        if (rng.bernoulli(gamma_margin)) return FeatureVector{rng.uniform(2.0, 3.0)};
        return FeatureVector{rng.uniform(0.0, 1.0)};
    };
}

Sampler uniform1d_sampler(double lo, double hi) {
    return [lo, hi](Rng& rng) { return FeatureVector{rng.uniform(lo, hi)}; };
}

void check_gaussian(const TaskSpec& spec) {
    if (spec.sigma <= 0.0) throw InvalidInputError("gaussian task: sigma must be > 0");
    if (spec.mean_pos.empty() || spec.mean_pos.size() != spec.mean_neg.size()) {
        throw InvalidInputError("gaussian task: means must agree in dimension (>= 1)");
    }
}

void check_custom(const TaskSpec& spec) {
    const auto band_ok = [](double lo, double hi) {
        return lo >= 0.0 && hi <= 1.0 && lo <= hi;
    };
    if (!band_ok(spec.score_pos_lo, spec.score_pos_hi) ||
        !band_ok(spec.score_neg_lo, spec.score_neg_hi)) {
        throw InvalidInputError("custom_score task: score bands must be within [0,1]");
    }
}

std::pair<Sampler, Sampler> make_samplers(const TaskSpec& spec) {
    switch (spec.kind) {
        case TaskKind::gaussian:
            check_gaussian(spec);
            return {gaussian_sampler(spec.mean_pos, spec.sigma),
                    gaussian_sampler(spec.mean_neg, spec.sigma)};
        case TaskKind::triangle:
            return {triangle_sampler(kPosTriangle), triangle_sampler(kNegTriangle)};
        case TaskKind::anchor:
            if (!(spec.gamma_margin > 0.0 && spec.gamma_margin <= 1.0)) {
                throw InvalidInputError("anchor task: gamma_margin outside (0,1]");
            }
            return {anchor_pos_sampler(spec.gamma_margin), uniform1d_sampler(0.0, 1.0)};
        case TaskKind::custom_score:
            check_custom(spec);
            return {uniform1d_sampler(spec.score_pos_lo, spec.score_pos_hi),
                    uniform1d_sampler(spec.score_neg_lo, spec.score_neg_hi)};
    }
    throw InvalidInputError("unknown task kind");
}

}  // namespace

PUDataset gen_gaussian_task(const TaskSpec& spec) {
    check_gaussian(spec);
    return assemble(gaussian_sampler(spec.mean_pos, spec.sigma),
                    gaussian_sampler(spec.mean_neg, spec.sigma), spec.alpha, spec.n_p, spec.n_u,
                    spec.seed);
}

PUDataset gen_triangle_task(std::size_t n_p, std::size_t n_u, double alpha, RandomSeed seed) {
    return assemble(triangle_sampler(kPosTriangle), triangle_sampler(kNegTriangle), alpha, n_p,
                    n_u, seed);
}

PUDataset gen_anchor_task(double gamma_margin, double alpha, std::size_t n_p, std::size_t n_u,
                          RandomSeed seed) {
    if (!(gamma_margin > 0.0 && gamma_margin <= 1.0)) {
        throw InvalidInputError("anchor task: gamma_margin outside (0,1]");
    }
    return assemble(anchor_pos_sampler(gamma_margin), uniform1d_sampler(0.0, 1.0), alpha, n_p,
                    n_u, seed);
}

PUDataset gen_custom_score_task(const TaskSpec& spec) {
    check_custom(spec);
    return assemble(uniform1d_sampler(spec.score_pos_lo, spec.score_pos_hi),
                    uniform1d_sampler(spec.score_neg_lo, spec.score_neg_hi), spec.alpha, spec.n_p,
                    spec.n_u, spec.seed);
}

PUDataset generate_task(const TaskSpec& spec) {
    auto [pos, neg] = make_samplers(spec);
    return assemble(pos, neg, spec.alpha, spec.n_p, spec.n_u, spec.seed);
}

PUDataset generate_eval_set(const TaskSpec& spec, std::size_t n_per_class, RandomSeed seed) {
    auto [pos, neg] = make_samplers(spec);
    Rng rng(seed);
    PUDataset out;
    out.positives.reserve(n_per_class);
    for (std::size_t i = 0; i < n_per_class; ++i) out.positives.push_back(pos(rng));
    out.unlabeled.reserve(n_per_class);
    for (std::size_t i = 0; i < n_per_class; ++i) out.unlabeled.push_back(neg(rng));
    out.hidden_labels = HiddenLabels(std::vector<std::int8_t>(n_per_class, -1));
    return out;
}

double gaussian_bayes_accuracy(const TaskSpec& spec) {
    check_gaussian(spec);
    double d2 = 0.0;
    for (std::size_t i = 0; i < spec.mean_pos.size(); ++i) {
        const double d = spec.mean_pos[i] - spec.mean_neg[i];
        d2 += d * d;
    }
    const double arg = std::sqrt(d2) / (2.0 * spec.sigma);
    return 0.5 * std::erfc(-arg / std::sqrt(2.0));  // Phi(arg)
}

}  // namespace pukit
