// pukit — positive-unlabeled learning toolkit CLI.
//
// Subcommands: estimate (single-shot mixture proportion estimation on score
// files), train (cvir/tedn on a synthetic task), bench (full experiment ->
// CSV), sweep (bench across mixture proportions), plotdata (diagnostic
// curves). Exit codes: 0 ok, 2 config error, 3 data error, 4 numerical
// failure. PU_KIT_SEED overrides every configured seed.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <memory>

#include "pukit/bench.hpp"
#include "pukit/errors.hpp"
#include "pukit/model.hpp"
#include "pukit/mpe.hpp"
#include "pukit/random.hpp"
#include "pukit/synth.hpp"
#include "pukit/tedn.hpp"
#include "pukit/train.hpp"

namespace {

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::vector<double> read_score_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pukit::IoError("cannot open score file: " + path);
    std::vector<double> scores;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // trim whitespace; skip blank lines
        const auto a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        const auto b = line.find_last_not_of(" \t\r");
        const std::string tok = line.substr(a, b - a + 1);
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            if (!(v >= 0.0 && v <= 1.0)) {
                throw pukit::IoError(path + ":" + std::to_string(line_no) +
                                     ": score outside [0,1]: " + tok);
            }
            scores.push_back(v);
        } catch (const std::logic_error&) {
            throw pukit::IoError(path + ":" + std::to_string(line_no) +
                                 ": not a number: " + tok);
        }
    }
    if (scores.empty()) throw pukit::IoError("no scores in file: " + path);
    return scores;
}

struct CommonOptions {
    pukit::ExperimentConfig config;
    std::string output;
};

// task/model/train flags shared by train, bench, sweep and plotdata
void add_common_options(CLI::App* cmd, CommonOptions& opt) {
    auto& cfg = opt.config;
    cmd->add_option("--task", [&cfg](const std::vector<std::string>& v) {
            cfg.task.kind = pukit::task_kind_from_string(v.back());
            return true;
        }, "Task kind: gaussian|triangle|anchor|custom_score")
        ->type_name("KIND");
    cmd->add_option("--alpha", cfg.task.alpha, "True mixture proportion")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--n-pos", cfg.task.n_p, "Positive sample count");
    cmd->add_option("--n-unl", cfg.task.n_u, "Unlabeled sample count");
    cmd->add_option("--mean-pos", cfg.task.mean_pos, "Gaussian positive mean (repeat per coordinate)");
    cmd->add_option("--mean-neg", cfg.task.mean_neg, "Gaussian negative mean");
    cmd->add_option("--sigma", cfg.task.sigma, "Gaussian stddev");
    cmd->add_option("--gamma-margin", cfg.task.gamma_margin, "Anchor mass of the positive distribution");
    cmd->add_option("--score-pos-lo", cfg.task.score_pos_lo, "custom_score positive band low");
    cmd->add_option("--score-pos-hi", cfg.task.score_pos_hi, "custom_score positive band high");
    cmd->add_option("--score-neg-lo", cfg.task.score_neg_lo, "custom_score negative band low");
    cmd->add_option("--score-neg-hi", cfg.task.score_neg_hi, "custom_score negative band high");

    cmd->add_option("--model", cfg.model, "Model: logistic|mlp")->check(CLI::IsMember({"logistic", "mlp"}));
    cmd->add_option("--hidden", cfg.hidden, "MLP hidden units");
    cmd->add_option("--lr", cfg.train.learning_rate, "Learning rate");
    cmd->add_option("--momentum", cfg.train.momentum, "SGD momentum");
    cmd->add_option("--weight-decay", cfg.train.weight_decay, "Weight decay");
    cmd->add_option("--batch-size", cfg.train.batch_size, "Minibatch size");
    cmd->add_option("--epochs", cfg.train.epochs, "Trajectory length (pvu/cvir cap)");
    cmd->add_option("--threshold", cfg.train.threshold, "Classification threshold");

    cmd->add_option("--warm-epochs", cfg.tedn.warm_start_epochs, "Warm start epochs (tedn)");
    cmd->add_option("--max-epochs", cfg.tedn.max_epochs, "Post-warm epoch cap (tedn)");
    cmd->add_option("--split-fraction", cfg.tedn.split_fraction, "Train share of the train/holdout split")
        ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)));
    cmd->add_option("--delta", cfg.bbe.delta, "Estimator confidence level")->check(CLI::Range(1e-12, 1.0));
    cmd->add_option("--gamma", cfg.bbe.gamma, "Penalty inflation");
    cmd->add_option("--scott-delta", cfg.scott_delta, "Comparator confidence level");
    cmd->add_flag("--union-bound", cfg.scott_union_bound, "Comparator: rescale delta by the union bound");
    cmd->add_option("--eval-n", cfg.eval_per_class, "Labeled eval samples per class");
    cmd->add_option("--seeds", cfg.seeds, "Seeds (repeat or comma-separate)")->delimiter(',');
    cmd->add_option("--mnist-images", [&cfg](const std::vector<std::string>& v) {
            cfg.mnist_images = v.back();
            return true;
        }, "IDX image file for the digit-1-vs-7 task")->type_name("PATH");
    cmd->add_option("--mnist-labels", [&cfg](const std::vector<std::string>& v) {
            cfg.mnist_labels = v.back();
            return true;
        }, "IDX label file for the digit-1-vs-7 task")->type_name("PATH");
    cmd->add_option("--output,-o", opt.output, "Output CSV path (default stdout)");
}

void write_records(const std::vector<pukit::ExperimentRecord>& records, const std::string& path) {
    if (path.empty()) {
        pukit::write_csv(records, std::cout);
    } else {
        pukit::write_csv_file(records, path);
    }
}

void apply_seed_override(pukit::ExperimentConfig& cfg) {
    const char* env = std::getenv("PU_KIT_SEED");
    if (!env) return;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
        cfg.seeds = {static_cast<pukit::RandomSeed>(v)};
    } catch (const std::logic_error&) {
        throw pukit::SchemaError(std::string("PU_KIT_SEED is not an unsigned integer: ") + env);
    }
}

int run(int argc, char** argv) {
    CLI::App app{"positive-unlabeled learning toolkit"};
    app.require_subcommand(1);
    // key = value, with [subcommand] sections holding that subcommand's options
    app.set_config("--config", "", "Config file (INI: key = value, [subcommand] sections)");

    // ---- estimate ----
    auto* est_cmd = app.add_subcommand("estimate", "Single-shot mixture proportion estimation on score files");
    std::string pos_file, unl_file, est_method = "bbe";
    pukit::BBEConfig est_bbe;
    double est_scott_delta = 0.1;
    bool est_union = false;
    est_cmd->add_option("--positives,-p", pos_file, "Positive score file, one real per line")->required();
    est_cmd->add_option("--unlabeled,-u", unl_file, "Unlabeled score file, one real per line")->required();
    est_cmd->add_option("--method,-m", est_method, "bbe|scott|naive")
        ->check(CLI::IsMember({"bbe", "scott", "naive"}));
    est_cmd->add_option("--delta", est_bbe.delta, "Confidence level")->check(CLI::Range(1e-12, 1.0));
    est_cmd->add_option("--gamma", est_bbe.gamma, "Penalty inflation");
    est_cmd->add_option("--scott-delta", est_scott_delta, "Comparator confidence level");
    est_cmd->add_flag("--union-bound", est_union, "Comparator: rescale delta by the union bound");

    // ---- train ----
    CommonOptions train_opt;
    auto* train_cmd = app.add_subcommand("train", "Train cvir or tedn on a synthetic task");
    std::string train_method = "tedn";
    std::string save_model_path;
    train_cmd->add_option("--method,-m", train_method, "cvir|tedn")
        ->check(CLI::IsMember({"cvir", "tedn"}));
    train_cmd->add_option("--save-model", save_model_path, "Write the trained model (JSON)");
    add_common_options(train_cmd, train_opt);

    // ---- bench ----
    CommonOptions bench_opt;
    auto* bench_cmd = app.add_subcommand("bench", "Run a full experiment and emit CSV rows");
    bench_cmd->add_option("--methods,-m", bench_opt.config.methods, "bbe,scott,naive,pvu,cvir,tedn")
        ->delimiter(',');
    add_common_options(bench_cmd, bench_opt);

    // ---- sweep ----
    CommonOptions sweep_opt;
    std::vector<double> sweep_alphas;
    auto* sweep_cmd = app.add_subcommand("sweep", "bench across a list of mixture proportions");
    sweep_cmd->add_option("--methods,-m", sweep_opt.config.methods, "bbe,scott,naive,pvu,cvir,tedn")
        ->delimiter(',');
    sweep_cmd->add_option("--alphas", sweep_alphas, "Mixture proportions to sweep")
        ->delimiter(',')->required();
    add_common_options(sweep_cmd, sweep_opt);

    // ---- plotdata ----
    CommonOptions plot_opt;
    std::string plot_kind = "ucb_curve";
    auto* plot_cmd = app.add_subcommand("plotdata", "Columnar data for diagnostic plots");
    plot_cmd->add_option("--kind,-k", plot_kind, "epochwise|ucb_curve|purity_curve|rate_loglog")
        ->check(CLI::IsMember({"epochwise", "ucb_curve", "purity_curve", "rate_loglog"}));
    add_common_options(plot_cmd, plot_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (est_cmd->parsed()) {
        const auto zp = read_score_file(pos_file);
        const auto zu = read_score_file(unl_file);
        pukit::MixtureEstimate est;
        if (est_method == "bbe") {
            est = pukit::bbe_estimate(zp, zu, est_bbe);
        } else if (est_method == "scott") {
            est = pukit::scott_estimate(zp, zu, est_scott_delta, est_union);
        } else {
            est = pukit::naive_ratio_estimate(zp, zu);
        }
        std::cout << "method,alpha_hat,alpha_clamped,c_hat,q_p_at_c,q_u_at_c,objective\n"
                  << est.method << ',' << fmt6(est.alpha_hat) << ',' << fmt6(est.alpha_clamped)
                  << ',' << fmt6(est.c_hat) << ',' << fmt6(est.q_p_at_c) << ','
                  << fmt6(est.q_u_at_c) << ',' << fmt6(est.ucb_value) << '\n';
        return 0;
    }

    if (train_cmd->parsed()) {
        auto& cfg = train_opt.config;
        apply_seed_override(cfg);
        cfg.methods = {train_method};
        if (cfg.seeds.size() != 1) {
            throw pukit::SchemaError("train expects exactly one seed");
        }
        const auto records = pukit::run_experiment(cfg);
        if (!train_opt.output.empty()) pukit::write_csv_file(records, train_opt.output);
        const double final_err = records.empty() ? 0.0 : records.back().train_error;
        const double final_alpha = records.empty() ? 0.0 : records.back().alpha_hat;
        std::cout << "method=" << train_method << " epochs=" << records.size()
                  << " alpha_hat=" << fmt6(final_alpha)
                  << " alpha_err=" << fmt6(pukit::final_model_report_alpha_err(records))
                  << " train_error=" << fmt6(final_err)
                  << " pvn_accuracy=" << fmt6(pukit::final_model_report_accuracy(records))
                  << '\n';
        if (!save_model_path.empty()) {
            // reproduce the exact run to capture the final model
            const auto streams = pukit::experiment_streams(cfg.seeds[0]);
            pukit::TaskSpec spec = cfg.task;
            spec.seed = streams.task;
            const auto data = pukit::generate_task(spec);
            pukit::Rng model_rng(streams.model);
            std::unique_ptr<pukit::Classifier> model;
            if (cfg.model == "logistic") {
                model = std::make_unique<pukit::LogisticModel>(data.dim(), model_rng);
            } else {
                model = std::make_unique<pukit::MLPModel>(data.dim(), cfg.hidden, model_rng);
            }
            pukit::TrainConfig train = cfg.train;
            train.seed = cfg.seeds[0];
            if (train_method == "cvir") {
                pukit::cvir_train(*model, data.positives, data.unlabeled, spec.alpha, train);
            } else {
                pukit::TEDNConfig tc = cfg.tedn;
                tc.bbe = cfg.bbe;
                tc.train = train;
                pukit::tedn_train(*model, data, tc);
            }
            pukit::save_model(*model, save_model_path);
        }
        return 0;
    }

    if (bench_cmd->parsed()) {
        apply_seed_override(bench_opt.config);
        write_records(pukit::run_experiment(bench_opt.config), bench_opt.output);
        return 0;
    }

    if (sweep_cmd->parsed()) {
        apply_seed_override(sweep_opt.config);
        write_records(pukit::sweep_alpha(sweep_opt.config, sweep_alphas), sweep_opt.output);
        return 0;
    }

    if (plot_cmd->parsed()) {
        apply_seed_override(plot_opt.config);
        const auto kind = pukit::plot_kind_from_string(plot_kind);
        if (plot_opt.output.empty()) {
            pukit::emit_plot_data(plot_opt.config, kind, std::cout);
        } else {
            std::ofstream out(plot_opt.output);
            if (!out) throw pukit::IoError("cannot write: " + plot_opt.output);
            pukit::emit_plot_data(plot_opt.config, kind, out);
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const pukit::SchemaError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const pukit::UnsupportedOperationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const pukit::InvalidInputError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const pukit::IoError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const pukit::EstimationFailureError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 4;
    } catch (const pukit::TrainingDivergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
}
