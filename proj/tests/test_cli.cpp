#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pukit/model.hpp"

namespace fs = std::filesystem;

namespace {

struct TmpDir {
    fs::path dir;
    TmpDir() : dir(fs::temp_directory_path() / "pukit_cli_test") { fs::create_directories(dir); }
    ~TmpDir() { fs::remove_all(dir); }
    fs::path operator/(const char* name) const { return dir / name; }
};

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// runs the installed binary through the shell; returns the exit code
int run_cli(const std::string& args, const fs::path& stdout_file,
            const std::string& env_prefix = "") {
    std::ostringstream cmd;
    cmd << env_prefix << '"' << PUKIT_CLI_PATH << "\" " << args << " > " << stdout_file
        << " 2>&1";
    const int status = std::system(cmd.str().c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> lines;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string csv_field(const std::string& line, int idx) {
    std::istringstream in(line);
    std::string field;
    for (int i = 0; i <= idx; ++i) {
        if (!std::getline(in, field, ',')) return "";
    }
    return field;
}

void write_score_fixtures(const TmpDir& tmp) {
    write_file(tmp / "pos.txt", "0.9\n0.8\n0.7\n0.6\n0.5\n");
    // decorated on purpose: whitespace and CRLF must be tolerated
    write_file(tmp / "unl.txt", "\t0.85 \r\n0.75\n\n0.3\n0.2\n0.1\n");
}

}  // namespace

TEST_CASE("estimate prints one labelled row per invocation") {
    TmpDir tmp;
    write_score_fixtures(tmp);
    const std::string files =
        " -p \"" + (tmp / "pos.txt").string() + "\" -u \"" + (tmp / "unl.txt").string() + "\"";

    CHECK(run_cli("estimate" + files, tmp / "out") == 0);
    auto out = lines_of(slurp(tmp / "out"));
    REQUIRE(out.size() == 2);
    CHECK(out[0] == "method,alpha_hat,alpha_clamped,c_hat,q_p_at_c,q_u_at_c,objective");
    CHECK(out[1] == "bbe,0.4,0.4,0.5,1,0.4,1.62687");

    CHECK(run_cli("estimate --method scott" + files, tmp / "out") == 0);
    out = lines_of(slurp(tmp / "out"));
    REQUIRE(out.size() == 2);
    CHECK(out[1] == "scott,0.753364,0.753364,0.5,1,0.4,0.753364");

    CHECK(run_cli("estimate -m naive" + files, tmp / "out") == 0);
    out = lines_of(slurp(tmp / "out"));
    REQUIRE(out.size() == 2);
    CHECK(out[1] == "naive,0,0,0.9,0.2,0,0");
}

TEST_CASE("estimate distinguishes data errors from config errors") {
    TmpDir tmp;
    write_score_fixtures(tmp);
    write_file(tmp / "bad.txt", "0.5\nabc\n");
    write_file(tmp / "range.txt", "0.5\n1.5\n");
    write_file(tmp / "blank.txt", "\n  \n");
    const std::string pos = " -p \"" + (tmp / "pos.txt").string() + "\"";

    CHECK(run_cli("estimate" + pos + " -u \"" + (tmp / "bad.txt").string() + "\"",
                  tmp / "out") == 3);
    CHECK(run_cli("estimate" + pos + " -u \"" + (tmp / "range.txt").string() + "\"",
                  tmp / "out") == 3);
    CHECK(run_cli("estimate" + pos + " -u \"" + (tmp / "blank.txt").string() + "\"",
                  tmp / "out") == 3);
    CHECK(run_cli("estimate" + pos + " -u \"" + (tmp / "missing.txt").string() + "\"",
                  tmp / "out") == 3);

    CHECK(run_cli("estimate --method wat" + pos + " -u \"" + (tmp / "pos.txt").string() + "\"",
                  tmp / "out") == 2);
    CHECK(run_cli("estimate", tmp / "out") == 2);  // missing required files
    CHECK(run_cli("definitely-not-a-subcommand", tmp / "out") == 2);
    CHECK(run_cli("", tmp / "out") == 2);  // a subcommand is required
}

TEST_CASE("bench rewrites identically and honours the seed override") {
    TmpDir tmp;
    const std::string args =
        "bench --methods bbe,cvir --seeds 1,2 --n-pos 120 --n-unl 120 --epochs 3 --eval-n 40";
    CHECK(run_cli(args + " -o \"" + (tmp / "a.csv").string() + "\"", tmp / "out") == 0);
    CHECK(run_cli(args + " --output \"" + (tmp / "b.csv").string() + "\"", tmp / "out") == 0);
    const auto a = slurp(tmp / "a.csv");
    CHECK(a == slurp(tmp / "b.csv"));

    const auto rows = lines_of(a);
    REQUIRE(rows.size() > 1);
    CHECK(rows[0] ==
          "version,method,seed,epoch,alpha_true,alpha_hat,abs_err,train_error,pvn_accuracy");
    bool saw_seed_two = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (csv_field(rows[i], 2) == "2") saw_seed_two = true;
    }
    CHECK(saw_seed_two);

    // the env var forces a single seed for any subcommand
    CHECK(run_cli(args, tmp / "seeded", "PU_KIT_SEED=7 ") == 0);
    const auto seeded = lines_of(slurp(tmp / "seeded"));
    REQUIRE(seeded.size() > 1);
    for (std::size_t i = 1; i < seeded.size(); ++i) CHECK(csv_field(seeded[i], 2) == "7");

    CHECK(run_cli(args, tmp / "out", "PU_KIT_SEED=abc ") == 2);
    CHECK(run_cli("bench --methods bbe,nonsense --seeds 1", tmp / "out") == 2);
}

TEST_CASE("a config file fills in options by subcommand section") {
    TmpDir tmp;
    write_file(tmp / "cfg.ini",
               "[bench]\n"
               "alpha = 0.25\n"
               "n-pos = 150\n"
               "n-unl = 150\n"
               "epochs = 2\n"
               "eval-n = 40\n"
               "methods = bbe\n"
               "seeds = 5\n");
    CHECK(run_cli("--config \"" + (tmp / "cfg.ini").string() + "\" bench -o \"" +
                      (tmp / "out.csv").string() + "\"",
                  tmp / "out") == 0);
    const auto rows = lines_of(slurp(tmp / "out.csv"));
    REQUIRE(rows.size() == 3);  // header + one row per epoch
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(csv_field(rows[i], 2) == "5");
        CHECK(csv_field(rows[i], 4) == "0.25");
    }
}

TEST_CASE("sweep requires proportions and stacks them") {
    TmpDir tmp;
    CHECK(run_cli("sweep --methods bbe --seeds 1 --n-pos 100 --n-unl 100 --epochs 2 "
                  "--eval-n 30 --alphas 0.25,0.75 -o \"" + (tmp / "s.csv").string() + "\"",
                  tmp / "out") == 0);
    const auto rows = lines_of(slurp(tmp / "s.csv"));
    REQUIRE(rows.size() == 5);
    CHECK(csv_field(rows[1], 4) == "0.25");
    CHECK(csv_field(rows[3], 4) == "0.75");

    CHECK(run_cli("sweep --methods bbe --seeds 1", tmp / "out") == 2);  // --alphas missing
}

TEST_CASE("train summarises a run on stdout") {
    TmpDir tmp;
    const std::string small =
        " --task gaussian --n-pos 150 --n-unl 150 --eval-n 40 --seeds 3";
    CHECK(run_cli("train --method tedn --warm-epochs 2 --max-epochs 4" + small,
                  tmp / "out") == 0);
    const auto text = slurp(tmp / "out");
    CHECK(text.find("method=tedn") != std::string::npos);
    CHECK(text.find(" epochs=") != std::string::npos);
    CHECK(text.find(" alpha_hat=") != std::string::npos);
    CHECK(text.find(" train_error=") != std::string::npos);
    CHECK(text.find(" pvn_accuracy=") != std::string::npos);

    CHECK(run_cli("train --method cvir --epochs 3" + small + " --seeds 1,2", tmp / "out") == 2);
    // the env override replaces the seed list, so two seeds become one
    CHECK(run_cli("train --method cvir --epochs 3 --task gaussian --n-pos 150 --n-unl 150 "
                  "--eval-n 40 --seeds 1,2",
                  tmp / "out", "PU_KIT_SEED=9 ") == 0);
}

TEST_CASE("saved models round-trip through the library loader") {
    TmpDir tmp;
    const auto model_path = (tmp / "model.json").string();
    CHECK(run_cli("train --method cvir --epochs 3 --task gaussian --n-pos 150 --n-unl 150 "
                  "--eval-n 40 --seeds 3 --save-model \"" + model_path + "\"",
                  tmp / "out") == 0);
    const auto model = pukit::load_model(model_path);
    REQUIRE(model != nullptr);
    CHECK(model->dim() == 2);
    pukit::FeatureVector x{0.3, -0.4};
    const double s = model->score(x);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
}

TEST_CASE("plotdata emits the requested table") {
    TmpDir tmp;
    const std::string small = " --task gaussian --n-pos 100 --n-unl 100 --warm-epochs 1 "
                              "--epochs 2 --eval-n 30 --seeds 2";
    CHECK(run_cli("plotdata --kind ucb_curve" + small, tmp / "out") == 0);
    auto rows = lines_of(slurp(tmp / "out"));
    REQUIRE_FALSE(rows.empty());
    CHECK(rows[0] == "c,q_u_hat,q_p_hat,ratio,ucb");

    CHECK(run_cli("plotdata -k purity_curve" + small, tmp / "out") == 0);
    rows = lines_of(slurp(tmp / "out"));
    REQUIRE_FALSE(rows.empty());
    CHECK(rows[0] == "c,bin_size,purity");

    CHECK(run_cli("plotdata --kind pie" + small, tmp / "out") == 2);
    // wrong task family for the rate curve is a config error, found after parsing
    CHECK(run_cli("plotdata --kind rate_loglog" + small, tmp / "out") == 2);
}

TEST_CASE("training divergence surfaces as a numerical failure") {
    TmpDir tmp;
    CHECK(run_cli("train --method cvir --lr nan --epochs 3 --task gaussian --n-pos 60 "
                  "--n-unl 60 --eval-n 20 --seeds 1",
                  tmp / "out") == 4);
    CHECK(slurp(tmp / "out").find("numerical failure") != std::string::npos);
}
