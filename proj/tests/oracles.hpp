#pragma once

// Reference values and brute-force reference implementations the tests pin
// the library against. Everything here is restated from first principles and
// calls nothing from the library: frozen constants were computed offline with
// an unrelated numerical stack, and the helpers below favor the dumbest
// correct algorithm over the efficient one.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// frozen constants
// ---------------------------------------------------------------------------

// sqrt(log(4/0.1) / (2 * 1000))
inline constexpr double kPenaltyN1000Delta01 = 0.04294694083467376;

// smallest eps >= 0 with P[Bin(10, 0.5+eps)/10 <= 0.5] <= 0.05
inline constexpr double kBinv10Half005 = 0.2775588989918706;
// same at n = 10000; close to the normal approximation z95*sqrt(p(1-p)/n)
inline constexpr double kBinv10000Half005 = 0.00827349559626056;
inline constexpr double kZ95 = 1.6448536269514722;

// standard normal CDF at 1
inline constexpr double kPhi1 = 0.8413447460685429;

// A 5+5 instance worked through exhaustively by hand/offline:
//   positives {0.9, 0.8, 0.7, 0.6, 0.5}, unlabeled {0.85, 0.75, 0.3, 0.2, 0.1}
// delta = 0.1, gamma = 0.01. The candidate grid has 11 thresholds.
inline const std::vector<double> kZp5{0.9, 0.8, 0.7, 0.6, 0.5};
inline const std::vector<double> kZu5{0.85, 0.75, 0.3, 0.2, 0.1};
inline constexpr double kBbe5C = 0.5;
inline constexpr double kBbe5Alpha = 0.4;
inline constexpr double kBbe5Ucb = 1.6268701530547767;
inline constexpr double kScott5C = 0.5;
inline constexpr double kScott5Alpha = 0.7533635467115334;
inline constexpr double kNaive5C = 0.9;
inline constexpr double kNaive5Alpha = 0.0;

// ---------------------------------------------------------------------------
// brute-force reference implementations
// ---------------------------------------------------------------------------

// #{scores >= z} by direct count
inline std::size_t tail_count(const std::vector<double>& scores, double z) {
    std::size_t k = 0;
    for (double s : scores) {
        if (s >= z) ++k;
    }
    return k;
}

inline double tail_fraction(const std::vector<double>& scores, double z) {
    return static_cast<double>(tail_count(scores, z)) / static_cast<double>(scores.size());
}

// sorted unique union of both samples plus 0.0 (restated, not shared)
inline std::vector<double> grid_points(const std::vector<double>& zp,
                                       const std::vector<double>& zu) {
    std::vector<double> g{0.0};
    g.insert(g.end(), zp.begin(), zp.end());
    g.insert(g.end(), zu.begin(), zu.end());
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

// P[Bin(n, p) <= k] by log-gamma pmf summation (independent of any CDF library)
inline double binom_cdf(std::size_t n, std::size_t k, double p) {
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return k >= n ? 1.0 : 0.0;
    const double lp = std::log(p), lq = std::log1p(-p);
    const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i <= std::min(k, n); ++i) {
        const double li = lgn - std::lgamma(static_cast<double>(i) + 1.0) -
                          std::lgamma(static_cast<double>(n - i) + 1.0) +
                          static_cast<double>(i) * lp + static_cast<double>(n - i) * lq;
        sum += std::exp(li);
    }
    return std::min(sum, 1.0);
}

// smallest eps >= 0 with P[Bin(n, min(p_hat+eps,1))/n <= p_hat] <= delta,
// by bisection on the summation CDF above
inline double binom_inversion(std::size_t n, double p_hat, double delta) {
    const auto k = static_cast<std::size_t>(std::llround(p_hat * static_cast<double>(n)));
    if (k >= n) return 0.0;
    const auto tail = [&](double eps) {
        return binom_cdf(n, k, std::min(p_hat + eps, 1.0));
    };
    double lo = 0.0, hi = 1.0 - p_hat;
    if (tail(0.0) <= delta) return 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (tail(mid) <= delta ? hi : lo) = mid;
    }
    return hi;
}

// penalized tail-ratio minimization, O(n^2), fractions by direct counting
struct GridPick {
    double c = 0.0;
    double value = 0.0;  // minimized objective
    double ratio = 0.0;  // q_u/q_p at c
};

inline GridPick brute_bbe(const std::vector<double>& zp, const std::vector<double>& zu,
                          double delta, double gamma) {
    const double pen = std::sqrt(std::log(4.0 / delta) / (2.0 * static_cast<double>(zu.size()))) +
                       std::sqrt(std::log(4.0 / delta) / (2.0 * static_cast<double>(zp.size())));
    GridPick best;
    bool found = false;
    for (double c : grid_points(zp, zu)) {
        const double qp = tail_fraction(zp, c);
        if (qp <= 0.0) continue;
        const double qu = tail_fraction(zu, c);
        const double obj = qu / qp + (1.0 + gamma) / qp * pen;
        if (!found || obj < best.value) {
            found = true;
            best = {c, obj, qu / qp};
        }
    }
    return best;
}

inline GridPick brute_naive(const std::vector<double>& zp, const std::vector<double>& zu) {
    GridPick best;
    bool found = false;
    for (double c : grid_points(zp, zu)) {
        const double qp = tail_fraction(zp, c);
        if (qp <= 0.0) continue;
        const double ratio = tail_fraction(zu, c) / qp;
        if (!found || ratio < best.value) {
            found = true;
            best = {c, ratio, ratio};
        }
    }
    return best;
}

// every size-k subset by bitmask; minimizes the summed negative-label loss
// -log(1 - clamp(z)). n must stay small (<= ~20).
inline std::vector<std::size_t> brute_min_loss_subset(const std::vector<double>& scores,
                                                      std::size_t k) {
    const std::size_t n = scores.size();
    std::vector<double> loss(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = std::clamp(scores[i], 1e-7, 1.0 - 1e-7);
        loss[i] = -std::log1p(-z);
    }
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) total += loss[i];
        }
        if (total < best) {
            best = total;
            best_mask = mask;
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (best_mask & (1u << i)) out.push_back(i);
    }
    return out;
}

}  // namespace oracle
