#include "pukit/model.hpp"

#include <nlohmann/json.hpp>
#include <cmath>
#include <fstream>

#include "pukit/errors.hpp"

namespace pukit {

namespace {

double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

// d loss / d logit for the clamped cross-entropy; zero on the clamp plateaus
double ce_dlogit(double z, int label) {
    if (z <= kLossEps || z >= 1.0 - kLossEps) return 0.0;
    return label > 0 ? z - 1.0 : z;
}

}  // namespace

// ---------------------------------------------------------------- logistic

LogisticModel::LogisticModel(std::size_t dim, Rng& rng) : w_(dim) {
    if (dim == 0) throw InvalidInputError("logistic model needs dim >= 1");
    const double limit = std::sqrt(6.0 / static_cast<double>(dim + 1));
    for (auto& w : w_) w = rng.uniform(-limit, limit);
}

LogisticModel::LogisticModel(std::vector<double> weights, double bias)
    : w_(std::move(weights)), b_(bias) {
    if (w_.empty()) throw InvalidInputError("logistic model needs dim >= 1");
}

std::vector<double> LogisticModel::parameters() const {
    std::vector<double> p(w_);
    p.push_back(b_);
    return p;
}

void LogisticModel::set_parameters(std::span<const double> p) {
    if (p.size() != param_count()) throw InvalidInputError("parameter count mismatch");
    std::copy(p.begin(), p.end() - 1, w_.begin());
    b_ = p.back();
}

double LogisticModel::score(std::span<const double> x) const {
    if (x.size() != w_.size()) throw InvalidInputError("input dimension mismatch");
    double a = b_;
    for (std::size_t i = 0; i < w_.size(); ++i) a += w_[i] * x[i];
    return sigmoid(a);
}

double LogisticModel::score_and_accumulate_ce_grad(std::span<const double> x, int label,
                                                   double coeff, std::span<double> grad) const {
    const double z = score(x);
    const double g = coeff * ce_dlogit(z, label);
    for (std::size_t i = 0; i < w_.size(); ++i) grad[i] += g * x[i];
    grad[w_.size()] += g;
    return z;
}

std::unique_ptr<Classifier> LogisticModel::clone() const {
    return std::make_unique<LogisticModel>(*this);
}

// --------------------------------------------------------------------- mlp

MLPModel::MLPModel(std::size_t dim, std::size_t hidden, Rng& rng)
    : d_(dim), h_(hidden), w1_(dim * hidden), b1_(hidden, 0.0), w2_(hidden) {
    if (dim == 0 || hidden == 0) throw InvalidInputError("mlp needs dim >= 1 and hidden >= 1");
    const double l1 = std::sqrt(6.0 / static_cast<double>(dim + hidden));
    for (auto& w : w1_) w = rng.uniform(-l1, l1);
    const double l2 = std::sqrt(6.0 / static_cast<double>(hidden + 1));
    for (auto& w : w2_) w = rng.uniform(-l2, l2);
}

std::vector<double> MLPModel::parameters() const {
    std::vector<double> p;
    p.reserve(param_count());
    p.insert(p.end(), w1_.begin(), w1_.end());
    p.insert(p.end(), b1_.begin(), b1_.end());
    p.insert(p.end(), w2_.begin(), w2_.end());
    p.push_back(b2_);
    return p;
}

void MLPModel::set_parameters(std::span<const double> p) {
    if (p.size() != param_count()) throw InvalidInputError("parameter count mismatch");
    auto it = p.begin();
    std::copy(it, it + static_cast<std::ptrdiff_t>(w1_.size()), w1_.begin());
    it += static_cast<std::ptrdiff_t>(w1_.size());
    std::copy(it, it + static_cast<std::ptrdiff_t>(h_), b1_.begin());
    it += static_cast<std::ptrdiff_t>(h_);
    std::copy(it, it + static_cast<std::ptrdiff_t>(h_), w2_.begin());
    it += static_cast<std::ptrdiff_t>(h_);
    b2_ = *it;
}

double MLPModel::score(std::span<const double> x) const {
    if (x.size() != d_) throw InvalidInputError("input dimension mismatch");
    double a = b2_;
    for (std::size_t j = 0; j < h_; ++j) {
        double h = b1_[j];
        const double* row = &w1_[j * d_];
        for (std::size_t i = 0; i < d_; ++i) h += row[i] * x[i];
        if (h > 0.0) a += w2_[j] * h;
    }
    return sigmoid(a);
}

double MLPModel::score_and_accumulate_ce_grad(std::span<const double> x, int label, double coeff,
                                              std::span<double> grad) const {
    if (x.size() != d_) throw InvalidInputError("input dimension mismatch");
    // forward, keeping hidden activations
    thread_local std::vector<double> hidden;
    hidden.assign(h_, 0.0);
    double a = b2_;
    for (std::size_t j = 0; j < h_; ++j) {
        double h = b1_[j];
        const double* row = &w1_[j * d_];
        for (std::size_t i = 0; i < d_; ++i) h += row[i] * x[i];
        if (h > 0.0) {
            hidden[j] = h;
            a += w2_[j] * h;
        }
    }
    const double z = sigmoid(a);
    const double g = coeff * ce_dlogit(z, label);
    if (g != 0.0) {
        double* gw1 = grad.data();
        double* gb1 = gw1 + w1_.size();
        double* gw2 = gb1 + h_;
        double* gb2 = gw2 + h_;
        for (std::size_t j = 0; j < h_; ++j) {
            gw2[j] += g * hidden[j];
            if (hidden[j] > 0.0) {  // ReLU gate
                const double gh = g * w2_[j];
                double* row = gw1 + j * d_;
                for (std::size_t i = 0; i < d_; ++i) row[i] += gh * x[i];
                gb1[j] += gh;
            }
        }
        *gb2 += g;
    }
    return z;
}

std::unique_ptr<Classifier> MLPModel::clone() const { return std::make_unique<MLPModel>(*this); }

// ------------------------------------------------------------ serialization

namespace {
constexpr const char* kFormatTag = "pukit-model";
constexpr int kFormatVersion = 1;
}  // namespace

void save_model(const Classifier& model, const std::string& path) {
    nlohmann::json doc;
    doc["format"] = kFormatTag;
    doc["version"] = kFormatVersion;
    doc["kind"] = model.kind();
    doc["dim"] = model.dim();
    if (const auto* mlp = dynamic_cast<const MLPModel*>(&model)) {
        doc["hidden"] = mlp->hidden();
    }
    doc["arrays"] = nlohmann::json::array();
    doc["arrays"].push_back({{"name", "parameters"}, {"values", model.parameters()}});

    std::ofstream out(path);
    if (!out) throw IoError("cannot write model file: " + path);
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

std::unique_ptr<Classifier> load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read model file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed model file " + path + ": " + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != kFormatTag) {
            throw SchemaError("not a model file: " + path);
        }
        if (doc.at("version").get<int>() != kFormatVersion) {
            throw SchemaError("unsupported model file version in " + path);
        }
        const auto kind = doc.at("kind").get<std::string>();
        const auto dim = doc.at("dim").get<std::size_t>();
        const auto params = doc.at("arrays").at(0).at("values").get<std::vector<double>>();
        std::unique_ptr<Classifier> model;
        if (kind == "logistic") {
            model = std::make_unique<LogisticModel>(std::vector<double>(dim, 0.0), 0.0);
        } else if (kind == "mlp") {
            Rng dummy(0);
            model = std::make_unique<MLPModel>(dim, doc.at("hidden").get<std::size_t>(), dummy);
        } else {
            throw SchemaError("unknown model kind '" + kind + "' in " + path);
        }
        model->set_parameters(params);
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("model file " + path + " missing fields: " + e.what());
    }
}

}  // namespace pukit
