#include "pukit/ecdf.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <algorithm>
#include <cmath>

#include "pukit/errors.hpp"

namespace pukit {

TailCDF::TailCDF(std::span<const double> scores) {
    if (scores.empty()) throw InvalidInputError("tail CDF needs at least one score");
    sorted_.assign(scores.begin(), scores.end());
    for (double z : sorted_) {
        if (!(z >= 0.0 && z <= 1.0)) {
            throw InvalidInputError("score outside [0,1]");
        }
    }
    std::sort(sorted_.begin(), sorted_.end());
}

std::size_t TailCDF::tail_count(double z) const {
    // scores equal to z count toward the tail
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), z);
    return static_cast<std::size_t>(sorted_.end() - it);
}

double TailCDF::eval(double z) const {
    return static_cast<double>(tail_count(z)) / static_cast<double>(sorted_.size());
}

ThresholdGrid::ThresholdGrid(std::span<const double> scores_p, std::span<const double> scores_u) {
    candidates_.reserve(scores_p.size() + scores_u.size() + 1);
    candidates_.push_back(0.0);
    candidates_.insert(candidates_.end(), scores_p.begin(), scores_p.end());
    candidates_.insert(candidates_.end(), scores_u.begin(), scores_u.end());
    std::sort(candidates_.begin(), candidates_.end());
    candidates_.erase(std::unique(candidates_.begin(), candidates_.end()), candidates_.end());
}

double bbe_penalty(std::size_t n, double delta) {
    if (n < 1) throw InvalidInputError("bbe_penalty: n must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInputError("bbe_penalty: delta outside (0,1)");
    return std::sqrt(std::log(4.0 / delta) / (2.0 * static_cast<double>(n)));
}

double binomial_inversion(std::size_t n, double p_hat, double delta) {
    if (n < 1) throw InvalidInputError("binomial_inversion: n must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InvalidInputError("binomial_inversion: delta outside (0,1)");
    }
    if (!(p_hat >= 0.0 && p_hat <= 1.0)) {
        throw InvalidInputError("binomial_inversion: p_hat outside [0,1]");
    }

    const double k = std::round(p_hat * static_cast<double>(n));  // observed successes
    if (k >= static_cast<double>(n)) return 0.0;                  // no headroom above 1

    const auto tail_prob = [&](double eps) {
        const double p = std::min(p_hat + eps, 1.0);
        if (p >= 1.0) return 0.0;  // Binomial(n, 1) never falls at or below k < n
        const boost::math::binomial_distribution<double> dist(static_cast<double>(n), p);
        return boost::math::cdf(dist, k);
    };

    // P[Binomial(n, p_hat + eps) <= k] is decreasing in eps; find the smallest
    // eps with tail_prob <= delta.
    if (tail_prob(0.0) <= delta) return 0.0;
    double lo = 0.0, hi = 1.0 - p_hat;
    if (tail_prob(hi) > delta) return hi;  // cap at the headroom (k = n handled above)
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (tail_prob(mid) <= delta) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace pukit
