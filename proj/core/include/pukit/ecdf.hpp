#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pukit {

// Empirical tail CDF: q(z) = #{scores >= z} / n. Scores equal to z count
// toward the tail. Immutable after construction.
class TailCDF {
public:
    // throws InvalidInputError when scores is empty or any score is outside [0,1]
    explicit TailCDF(std::span<const double> scores);

    // O(log n)
    double eval(double z) const;

    // number of scores >= z
    std::size_t tail_count(double z) const;

    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted_scores() const { return sorted_; }

private:
    std::vector<double> sorted_;  // ascending
};

inline TailCDF build_tail_cdf(std::span<const double> scores) { return TailCDF(scores); }

// Candidate thresholds for all argmin searches: sorted, deduplicated union of
// both score samples plus 0.0. The objective functions are step functions that
// only change at observed scores, so the continuum argmin lands on this grid.
class ThresholdGrid {
public:
    ThresholdGrid(std::span<const double> scores_p, std::span<const double> scores_u);

    const std::vector<double>& candidates() const { return candidates_; }

private:
    std::vector<double> candidates_;  // ascending, unique, starts at 0.0
};

// Single-population deviation term sqrt(log(4/delta) / (2n)).
// throws InvalidInputError for n < 1 or delta outside (0,1)
double bbe_penalty(std::size_t n, double delta);

// Smallest eps >= 0 such that P[ Binomial(n, min(p_hat+eps, 1))/n <= p_hat ] <= delta,
// found by bisection on the exact binomial CDF to absolute tolerance 1e-9.
// Always <= 1 - p_hat. This is the one-sided binomial tail inversion used by
// the slope-based comparator estimator.
double binomial_inversion(std::size_t n, double p_hat, double delta);

}  // namespace pukit
