#include "pukit/mpe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pukit/errors.hpp"

namespace pukit {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

MixtureEstimate bbe_estimate(std::span<const double> scores_p, std::span<const double> scores_u,
                             const BBEConfig& config) {
    if (config.gamma < 0.0) throw InvalidInputError("bbe: gamma must be >= 0");
    const TailCDF qp(scores_p);
    const TailCDF qu(scores_u);
    const ThresholdGrid grid(scores_p, scores_u);

    const double pen = bbe_penalty(scores_u.size(), config.delta) +
                       bbe_penalty(scores_p.size(), config.delta);

    MixtureEstimate best;
    best.method = "bbe";
    double best_obj = std::numeric_limits<double>::infinity();
    bool found = false;
    for (double c : grid.candidates()) {
        const double qpc = qp.eval(c);
        if (qpc <= 0.0) continue;
        const double quc = qu.eval(c);
        const double obj = quc / qpc + (1.0 + config.gamma) / qpc * pen;
        if (!found || obj < best_obj) {  // strict: ties keep the smallest c
            found = true;
            best_obj = obj;
            best.c_hat = c;
            best.q_p_at_c = qpc;
            best.q_u_at_c = quc;
        }
    }
    // the grid contains 0.0 and q_p(0) = 1, so a candidate always exists
    best.alpha_hat = best.q_u_at_c / best.q_p_at_c;
    best.alpha_clamped = clamp01(best.alpha_hat);
    best.ucb_value = best_obj;
    return best;
}

MixtureEstimate scott_estimate(std::span<const double> scores_p, std::span<const double> scores_u,
                               double delta, bool union_bound) {
    const TailCDF qp(scores_p);
    const TailCDF qu(scores_u);
    const ThresholdGrid grid(scores_p, scores_u);

    const std::size_t n_p = scores_p.size(), n_u = scores_u.size();
    // union-bound rescaling spreads delta over each population's candidate set
    const double delta_p = union_bound ? delta / static_cast<double>(n_p) : delta;
    const double delta_u = union_bound ? delta / static_cast<double>(n_u) : delta;

    MixtureEstimate best;
    best.method = "scott";
    double best_obj = std::numeric_limits<double>::infinity();
    bool found = false;
    for (double c : grid.candidates()) {
        const double qpc = qp.eval(c);
        if (qpc <= 0.0) continue;
        const double quc = qu.eval(c);
        const double den = qpc - binomial_inversion(n_p, qpc, delta_p);
        if (den <= 0.0) continue;
        const double num = quc + binomial_inversion(n_u, quc, delta_u);
        const double obj = num / den;
        if (!found || obj < best_obj) {
            found = true;
            best_obj = obj;
            best.c_hat = c;
            best.q_p_at_c = qpc;
            best.q_u_at_c = quc;
        }
    }
    if (!found) {
        throw EstimationFailureError(
            "scott: every threshold excluded (q_p lower bound <= 0 at all candidates; "
            "n_p too small for delta)");
    }
    // the estimate is the minimized penalized slope itself, not the raw ratio
    best.alpha_hat = best_obj;
    best.alpha_clamped = clamp01(best.alpha_hat);
    best.ucb_value = best_obj;
    return best;
}

MixtureEstimate naive_ratio_estimate(std::span<const double> scores_p,
                                     std::span<const double> scores_u) {
    const TailCDF qp(scores_p);
    const TailCDF qu(scores_u);
    const ThresholdGrid grid(scores_p, scores_u);

    MixtureEstimate best;
    best.method = "naive";
    double best_obj = std::numeric_limits<double>::infinity();
    bool found = false;
    for (double c : grid.candidates()) {
        const double qpc = qp.eval(c);
        if (qpc <= 0.0) continue;
        const double obj = qu.eval(c) / qpc;
        if (!found || obj < best_obj) {
            found = true;
            best_obj = obj;
            best.c_hat = c;
            best.q_p_at_c = qpc;
            best.q_u_at_c = qu.eval(c);
        }
    }
    best.alpha_hat = best_obj;
    best.alpha_clamped = clamp01(best.alpha_hat);
    best.ucb_value = best_obj;
    return best;
}

TopBinDiagnostics top_bin_diagnostics(std::span<const double> scores_u,
                                      std::span<const std::int8_t> hidden_labels,
                                      const ThresholdGrid& grid) {
    if (scores_u.size() != hidden_labels.size()) {
        throw InvalidInputError("top_bin_diagnostics: scores and labels differ in length");
    }
    if (scores_u.empty()) throw InvalidInputError("top_bin_diagnostics: empty input");

    TopBinDiagnostics out;
    out.rows.reserve(grid.candidates().size());
    for (double c : grid.candidates()) {
        std::size_t in_bin = 0, positive = 0;
        for (std::size_t i = 0; i < scores_u.size(); ++i) {
            if (scores_u[i] >= c) {
                ++in_bin;
                if (hidden_labels[i] > 0) ++positive;
            }
        }
        TopBinRow row;
        row.c = c;
        row.bin_size = static_cast<double>(in_bin) / static_cast<double>(scores_u.size());
        if (in_bin > 0) {
            row.purity = static_cast<double>(positive) / static_cast<double>(in_bin);
        }
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace pukit
