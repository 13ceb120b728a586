#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pukit/ecdf.hpp"

namespace pukit {

struct BBEConfig {
    double delta = 0.1;   // confidence level
    double gamma = 0.01;  // penalty inflation
};

struct MixtureEstimate {
    double alpha_hat = 0.0;      // raw estimate; may exceed 1 on noisy data
    double alpha_clamped = 0.0;  // alpha_hat clipped to [0,1]; what consumers use
    double c_hat = 0.0;          // chosen threshold
    double q_p_at_c = 0.0;       // positive tail mass at c_hat, > 0
    double q_u_at_c = 0.0;       // unlabeled tail mass at c_hat
    double ucb_value = 0.0;      // minimized objective value
    std::string method;
};

struct TopBinRow {
    double c = 0.0;
    double bin_size = 0.0;               // fraction of unlabeled with score >= c
    std::optional<double> purity;        // truly-positive fraction of the bin; empty bin -> nullopt
};

struct TopBinDiagnostics {
    std::vector<TopBinRow> rows;
};

// Upper-confidence-bound threshold selection: minimizes
//   q_u(c)/q_p(c) + (1+gamma)/q_p(c) * (sqrt(log(4/delta)/(2 n_u)) + sqrt(log(4/delta)/(2 n_p)))
// over the threshold grid (candidates with q_p(c) = 0 excluded, objective ties
// broken toward the smallest c) and returns alpha_hat = q_u(c_hat)/q_p(c_hat).
// throws InvalidInputError for empty inputs or scores outside [0,1]
MixtureEstimate bbe_estimate(std::span<const double> scores_p, std::span<const double> scores_u,
                             const BBEConfig& config = {});

// Slope-style comparator: alpha_hat is the minimized value of
//   (q_u(c) + binv(n_u, q_u(c), d')) / (q_p(c) - binv(n_p, q_p(c), d'))
// with d' = delta, or delta/n per population when union_bound is set.
// Thresholds whose denominator is <= 0 are excluded.
// throws EstimationFailureError when every threshold is excluded
MixtureEstimate scott_estimate(std::span<const double> scores_p, std::span<const double> scores_u,
                               double delta = 0.1, bool union_bound = false);

// Degenerate baseline: min over the grid of the raw ratio q_u(c)/q_p(c).
MixtureEstimate naive_ratio_estimate(std::span<const double> scores_p,
                                     std::span<const double> scores_u);

// Per-threshold top-bin size and purity of unlabeled scores; evaluation only
// (requires ground-truth labels).
// throws InvalidInputError on length mismatch
TopBinDiagnostics top_bin_diagnostics(std::span<const double> scores_u,
                                      std::span<const std::int8_t> hidden_labels,
                                      const ThresholdGrid& grid);

}  // namespace pukit
