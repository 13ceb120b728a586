#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pukit/dataset.hpp"
#include "pukit/mpe.hpp"
#include "pukit/synth.hpp"
#include "pukit/tedn.hpp"
#include "pukit/train.hpp"

namespace pukit {

inline constexpr int kCsvVersion = 1;
inline constexpr char kCsvHeader[] =
    "version,method,seed,epoch,alpha_true,alpha_hat,abs_err,train_error,pvn_accuracy";

// Methods: single-shot estimators (bbe, scott, naive) evaluated per epoch on
// a shared domain-discrimination (PvU) trajectory's holdout scores; pvu
// itself (accuracy per epoch); cvir (known alpha); tedn.
struct ExperimentConfig {
    TaskSpec task;
    std::vector<std::string> methods{"bbe"};
    std::vector<RandomSeed> seeds{1};
    std::string model = "logistic";  // "logistic" | "mlp"
    std::size_t hidden = 64;
    TrainConfig train;         // train.epochs = trajectory length for pvu/cvir
    TEDNConfig tedn;           // warm start length etc.
    BBEConfig bbe;
    double scott_delta = 0.1;
    bool scott_union_bound = false;
    std::size_t eval_per_class = 2000;

    // optional IDX-format digit task replacing the synthetic generator
    std::optional<std::string> mnist_images;
    std::optional<std::string> mnist_labels;
};

// One row per (method, seed, epoch), sorted by (method, seed, epoch).
// Deterministic: identical config -> identical rows.
// throws SchemaError on unknown method/model names or empty method/seed lists
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config);

// Named sub-streams derived from one experiment seed, so external callers
// (e.g. the CLI's model saving) can regenerate exactly what a bench run saw.
struct SeedStreams {
    RandomSeed task;
    RandomSeed eval;
    RandomSeed model;
};
SeedStreams experiment_streams(RandomSeed seed);

// Stable schema: header kCsvHeader, floats with 6 significant digits.
void write_csv(std::span<const ExperimentRecord> records, std::ostream& out);
void write_csv_file(std::span<const ExperimentRecord> records, const std::string& path);

// Mean pvn_accuracy over the (up to) 10-epoch window ending at the best
// epoch. Baseline-only protocol: refuses cvir/tedn rows.
// throws InvalidInputError on empty input or cvir/tedn rows
double oracle_early_stop(std::span<const ExperimentRecord> records);

// Mean over the last (up to) 10 epochs.
// throws InvalidInputError on empty input
double final_model_report_accuracy(std::span<const ExperimentRecord> records);
double final_model_report_alpha_err(std::span<const ExperimentRecord> records);

// One run_experiment per alpha; long-format rows with alpha_true varying.
// throws SchemaError on an empty alpha list or alpha outside [0,1]
std::vector<ExperimentRecord> sweep_alpha(const ExperimentConfig& base,
                                          std::span<const double> alphas);

enum class PlotKind { epochwise, ucb_curve, purity_curve, rate_loglog };
PlotKind plot_kind_from_string(const std::string& s);  // throws SchemaError

// Columnar CSVs sufficient to redraw the corresponding diagnostic figure:
//   epochwise    — epoch, alpha_hat, abs_err, train_error, pvn_accuracy per method
//   ucb_curve    — c, q_u_hat, q_p_hat, ratio, ucb over the threshold grid
//   purity_curve — c, bin_size, purity over the grid (needs hidden labels)
//   rate_loglog  — log10_n, log10_mean_abs_err over n = 10^2..10^5
void emit_plot_data(const ExperimentConfig& config, PlotKind kind, std::ostream& out);

}  // namespace pukit
