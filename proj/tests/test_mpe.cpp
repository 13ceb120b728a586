#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "pukit/errors.hpp"
#include "pukit/mpe.hpp"
#include "pukit/random.hpp"

using namespace pukit;

namespace {

std::vector<double> random_scores(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(rng.uniform(lo, hi));
    return out;
}

}  // namespace

TEST_CASE("penalized estimator reproduces the worked 5+5 example") {
    const auto est = bbe_estimate(oracle::kZp5, oracle::kZu5, BBEConfig{0.1, 0.01});
    CHECK(est.c_hat == doctest::Approx(oracle::kBbe5C));
    CHECK(est.alpha_hat == doctest::Approx(oracle::kBbe5Alpha).epsilon(1e-12));
    CHECK(est.alpha_clamped == doctest::Approx(oracle::kBbe5Alpha).epsilon(1e-12));
    CHECK(est.ucb_value == doctest::Approx(oracle::kBbe5Ucb).epsilon(1e-12));
    CHECK(est.q_p_at_c == doctest::Approx(1.0));
    CHECK(est.q_u_at_c == doctest::Approx(0.4));
    CHECK(est.method == "bbe");
}

TEST_CASE("comparator estimator reproduces the worked 5+5 example") {
    const auto est = scott_estimate(oracle::kZp5, oracle::kZu5, 0.1, false);
    CHECK(est.c_hat == doctest::Approx(oracle::kScott5C));
    CHECK(est.alpha_hat == doctest::Approx(oracle::kScott5Alpha).epsilon(1e-6));
    CHECK(est.method == "scott");
}

TEST_CASE("raw-ratio baseline reproduces the worked 5+5 example") {
    const auto est = naive_ratio_estimate(oracle::kZp5, oracle::kZu5);
    CHECK(est.c_hat == doctest::Approx(oracle::kNaive5C));
    CHECK(est.alpha_hat == doctest::Approx(oracle::kNaive5Alpha));
    CHECK(est.q_p_at_c == doctest::Approx(0.2));
    CHECK(est.method == "naive");
}

TEST_CASE("identical score sets estimate a pure-positive mixture") {
    // q_u == q_p everywhere, so the ratio is 1 at every threshold and the
    // penalty favors the largest positive tail: c = 0, alpha = 1.
    Rng rng(5);
    const auto z = random_scores(rng, 50, 0.0, 1.0);
    const auto bbe = bbe_estimate(z, z);
    CHECK(bbe.c_hat == 0.0);
    CHECK(bbe.alpha_hat == doctest::Approx(1.0));

    const auto scott = scott_estimate(z, z);
    CHECK(scott.alpha_hat >= 1.0);  // inflation pushes the slope above the ratio
    CHECK(scott.alpha_clamped == doctest::Approx(1.0));

    const auto naive = naive_ratio_estimate(z, z);
    CHECK(naive.alpha_hat <= 1.0 + 1e-12);
}

TEST_CASE("penalized estimate never falls below the raw-ratio minimum") {
    // the raw minimum is a lower bound for the ratio at any threshold,
    // including the penalized argmin — the baseline's downward bias in one line
    Rng rng(71);
    for (int t = 0; t < 25; ++t) {
        const auto zp = random_scores(rng, 30 + rng.index(100), 0.2, 1.0);
        const auto zu = random_scores(rng, 30 + rng.index(100), 0.0, 1.0);
        const auto naive = naive_ratio_estimate(zp, zu);
        const auto bbe = bbe_estimate(zp, zu);
        CHECK(naive.alpha_hat <= bbe.alpha_hat + 1e-12);
    }
}

TEST_CASE("estimators agree with the brute-force grid search") {
    Rng rng(13);
    for (int t = 0; t < 20; ++t) {
        const auto zp = random_scores(rng, 5 + rng.index(60), 0.0, 1.0);
        const auto zu = random_scores(rng, 5 + rng.index(60), 0.0, 1.0);

        const auto mine = bbe_estimate(zp, zu, BBEConfig{0.1, 0.01});
        const auto ref = oracle::brute_bbe(zp, zu, 0.1, 0.01);
        CHECK(mine.c_hat == doctest::Approx(ref.c).epsilon(1e-15));
        CHECK(mine.alpha_hat == doctest::Approx(ref.ratio).epsilon(1e-12));
        CHECK(mine.ucb_value == doctest::Approx(ref.value).epsilon(1e-12));

        const auto mine_naive = naive_ratio_estimate(zp, zu);
        const auto ref_naive = oracle::brute_naive(zp, zu);
        CHECK(mine_naive.c_hat == doctest::Approx(ref_naive.c).epsilon(1e-15));
        CHECK(mine_naive.alpha_hat == doctest::Approx(ref_naive.value).epsilon(1e-12));
    }
}

TEST_CASE("objective ties break toward the smallest threshold") {
    // two positive scores, unlabeled empty tail above both: at c in {0.4, 0.8}
    // the objective is identical only if q_p matches, so craft equal tails
    const std::vector<double> zp{0.4, 0.4, 0.8, 0.8};
    const std::vector<double> zu{0.4, 0.4, 0.8, 0.8};
    // ratio = 1 at c in {0, 0.4}: q_p(0) = q_u(0) = 1, q_p(0.4) = q_u(0.4) = 1
    // (all scores >= 0.4), so both thresholds give the same objective
    const auto est = bbe_estimate(zp, zu);
    CHECK(est.c_hat == 0.0);
}

TEST_CASE("estimates are invariant under a monotone rescoring") {
    // squaring maps [0,1] to [0,1] and preserves order, so every tail count
    // and therefore the whole estimate is unchanged (thresholds map along)
    Rng rng(29);
    const auto zp = random_scores(rng, 80, 0.0, 1.0);
    const auto zu = random_scores(rng, 90, 0.0, 1.0);
    auto sq = [](std::vector<double> v) {
        for (double& x : v) x *= x;
        return v;
    };
    const auto a = bbe_estimate(zp, zu);
    const auto b = bbe_estimate(sq(zp), sq(zu));
    CHECK(a.alpha_hat == doctest::Approx(b.alpha_hat).epsilon(1e-12));
    CHECK(b.c_hat == doctest::Approx(a.c_hat * a.c_hat).epsilon(1e-12));
}

TEST_CASE("estimates are invariant under input permutation") {
    Rng rng(37);
    auto zp = random_scores(rng, 60, 0.0, 1.0);
    auto zu = random_scores(rng, 70, 0.0, 1.0);
    const auto before = bbe_estimate(zp, zu);
    const auto scott_before = scott_estimate(zp, zu);
    rng.shuffle(zp);
    rng.shuffle(zu);
    const auto after = bbe_estimate(zp, zu);
    const auto scott_after = scott_estimate(zp, zu);
    CHECK(before.alpha_hat == after.alpha_hat);
    CHECK(before.c_hat == after.c_hat);
    CHECK(scott_before.alpha_hat == scott_after.alpha_hat);
}

TEST_CASE("union-bound mode tightens the comparator upward") {
    Rng rng(41);
    const auto zp = random_scores(rng, 100, 0.3, 1.0);
    const auto zu = random_scores(rng, 100, 0.0, 1.0);
    const auto plain = scott_estimate(zp, zu, 0.1, false);
    const auto rescaled = scott_estimate(zp, zu, 0.1, true);
    // smaller per-candidate delta means wider inversion intervals, hence a
    // larger penalized slope
    CHECK(rescaled.alpha_hat >= plain.alpha_hat - 1e-12);
}

TEST_CASE("estimators validate their input") {
    const std::vector<double> ok{0.5};
    const std::vector<double> empty;
    const std::vector<double> bad{1.5};
    CHECK_THROWS_AS(bbe_estimate(empty, ok), InvalidInputError);
    CHECK_THROWS_AS(bbe_estimate(ok, bad), InvalidInputError);
    CHECK_THROWS_AS(scott_estimate(empty, ok), InvalidInputError);
    CHECK_THROWS_AS(naive_ratio_estimate(bad, ok), InvalidInputError);
    CHECK_THROWS_AS(bbe_estimate(ok, ok, BBEConfig{0.1, -0.5}), InvalidInputError);
}

TEST_CASE("top-bin diagnostics by hand") {
    const std::vector<double> zu{0.9, 0.8, 0.6, 0.4};
    const std::vector<std::int8_t> labels{1, 1, -1, -1};
    const ThresholdGrid grid(std::vector<double>{0.8, 0.5}, zu);
    const auto diag = top_bin_diagnostics(zu, labels, grid);
    REQUIRE(diag.rows.size() == grid.candidates().size());

    // grid: 0.0, 0.4, 0.5, 0.6, 0.8, 0.9
    CHECK(diag.rows[0].c == 0.0);
    CHECK(diag.rows[0].bin_size == doctest::Approx(1.0));
    CHECK(*diag.rows[0].purity == doctest::Approx(0.5));

    CHECK(diag.rows[2].c == doctest::Approx(0.5));
    CHECK(diag.rows[2].bin_size == doctest::Approx(0.75));
    CHECK(*diag.rows[2].purity == doctest::Approx(2.0 / 3.0));

    CHECK(diag.rows[4].c == doctest::Approx(0.8));
    CHECK(diag.rows[4].bin_size == doctest::Approx(0.5));
    CHECK(*diag.rows[4].purity == doctest::Approx(1.0));
}

TEST_CASE("top-bin diagnostics flag empty bins instead of dividing by zero") {
    const std::vector<double> zu{0.2, 0.3};
    const std::vector<std::int8_t> labels{1, -1};
    const ThresholdGrid grid(std::vector<double>{0.9}, zu);
    const auto diag = top_bin_diagnostics(zu, labels, grid);
    const auto& last = diag.rows.back();  // c = 0.9, nothing above
    CHECK(last.bin_size == doctest::Approx(0.0));
    CHECK_FALSE(last.purity.has_value());
}

TEST_CASE("top-bin diagnostics validate lengths") {
    const std::vector<double> zu{0.2, 0.3};
    const std::vector<std::int8_t> labels{1};
    const ThresholdGrid grid(zu, zu);
    CHECK_THROWS_AS(top_bin_diagnostics(zu, labels, grid), InvalidInputError);
}
