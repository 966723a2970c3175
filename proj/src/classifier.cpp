#include "newslens/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "newslens/common.hpp"

namespace newslens {

LinearHead init_head(int dim, int classes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
    LinearHead head;
    head.W.resize(classes, dim);
    for (int c = 0; c < classes; ++c)
        for (int k = 0; k < dim; ++k)
            head.W(c, k) = uniform_in(rng, -bound, bound);
    head.b = Eigen::VectorXd::Zero(classes);
    return head;
}

Eigen::VectorXd logits(const LinearHead& head, const Eigen::VectorXd& z) {
    if (z.size() != head.W.cols())
        throw std::invalid_argument("representation dimension " +
                                    std::to_string(z.size()) +
                                    " does not match head dimension " +
                                    std::to_string(head.W.cols()));
    return head.W * z + head.b;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& y) {
    const double m = y.maxCoeff();
    Eigen::VectorXd e = (y.array() - m).exp();
    return e / e.sum();
}

double cross_entropy(const Eigen::VectorXd& y, int label) {
    const double m = y.maxCoeff();
    const double log_sum = std::log((y.array() - m).exp().sum());
    return -(y[label] - m - log_sum);
}

double batch_loss_and_grad(const LinearHead& head, const Eigen::MatrixXd& Z,
                           const std::vector<int>& labels,
                           HeadGradients& grads) {
    const auto n = Z.rows();
    if (n == 0) throw std::invalid_argument("empty batch");
    if (static_cast<std::size_t>(n) != labels.size())
        throw std::invalid_argument("batch size does not match label count");

    grads.dW = Eigen::MatrixXd::Zero(head.W.rows(), head.W.cols());
    grads.db = Eigen::VectorXd::Zero(head.b.size());
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd z = Z.row(i).transpose();
        const Eigen::VectorXd y = logits(head, z);
        loss += cross_entropy(y, labels[static_cast<std::size_t>(i)]);
        Eigen::VectorXd delta = softmax(y);
        delta[labels[static_cast<std::size_t>(i)]] -= 1.0;
        grads.dW += delta * z.transpose();
        grads.db += delta;
    }
    const double inv = 1.0 / static_cast<double>(n);
    grads.dW *= inv;
    grads.db *= inv;
    return loss * inv;
}

AdamState make_adam_state(const LinearHead& head) {
    AdamState s;
    s.mW = Eigen::MatrixXd::Zero(head.W.rows(), head.W.cols());
    s.vW = Eigen::MatrixXd::Zero(head.W.rows(), head.W.cols());
    s.mb = Eigen::VectorXd::Zero(head.b.size());
    s.vb = Eigen::VectorXd::Zero(head.b.size());
    return s;
}

void adamw_step(LinearHead& head, const HeadGradients& grads, AdamState& state,
                int t, double lr_t, const TrainConfig& config) {
    if (t < 1) throw std::invalid_argument("step index must be >= 1");
    const double b1 = config.beta1, b2 = config.beta2;
    const double bc1 = 1.0 - std::pow(b1, t);
    const double bc2 = 1.0 - std::pow(b2, t);

    state.mW = b1 * state.mW + (1.0 - b1) * grads.dW;
    state.vW = b2 * state.vW + (1.0 - b2) * grads.dW.cwiseProduct(grads.dW);
    state.mb = b1 * state.mb + (1.0 - b1) * grads.db;
    state.vb = b2 * state.vb + (1.0 - b2) * grads.db.cwiseProduct(grads.db);

    const Eigen::MatrixXd mW_hat = state.mW / bc1;
    const Eigen::MatrixXd vW_hat = state.vW / bc2;
    const Eigen::VectorXd mb_hat = state.mb / bc1;
    const Eigen::VectorXd vb_hat = state.vb / bc2;

    head.W -= lr_t * (mW_hat.array() / (vW_hat.array().sqrt() + config.eps)).matrix();
    head.b -= lr_t * (mb_hat.array() / (vb_hat.array().sqrt() + config.eps)).matrix();

    // Decoupled decay, W only, after the Adam update.
    if (config.weight_decay != 0.0)
        head.W -= lr_t * config.weight_decay * head.W;
}

double cosine_lr(int step, int total_steps, double base_lr) {
    if (total_steps < 1) throw std::invalid_argument("total_steps must be >= 1");
    if (step < 0 || step > total_steps)
        throw std::invalid_argument("step must lie in [0, total_steps]");
    const double ratio = static_cast<double>(step) / total_steps;
    return 0.5 * base_lr * (1.0 + std::cos(M_PI * ratio));
}

TrainResult train_head(const Eigen::MatrixXd& Z, const std::vector<int>& labels,
                       const TrainConfig& config) {
    const auto n = static_cast<std::size_t>(Z.rows());
    if (n == 0) throw std::invalid_argument("cannot train on an empty split");
    if (labels.size() != n)
        throw std::invalid_argument("label count does not match representations");
    if (config.batch_size < 1 || config.epochs < 1 || config.lr <= 0.0)
        throw std::invalid_argument("lr, batch_size and epochs must be positive");

    TrainResult result;
    result.head = init_head(static_cast<int>(Z.cols()), 2, config.seed);
    AdamState state = make_adam_state(result.head);

    const std::size_t batches_per_epoch =
        (n + config.batch_size - 1) / config.batch_size;
    const int total_steps =
        config.epochs * static_cast<int>(batches_per_epoch);

    std::mt19937_64 rng(config.seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    int t = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t i = n - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
            std::swap(order[i], order[j]);
        }
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n;
             start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t stop =
                std::min(n, start + static_cast<std::size_t>(config.batch_size));
            const auto batch_n = static_cast<Eigen::Index>(stop - start);
            Eigen::MatrixXd batch(batch_n, Z.cols());
            std::vector<int> batch_labels(static_cast<std::size_t>(batch_n));
            for (Eigen::Index r = 0; r < batch_n; ++r) {
                batch.row(r) = Z.row(static_cast<Eigen::Index>(
                    order[start + static_cast<std::size_t>(r)]));
                batch_labels[static_cast<std::size_t>(r)] =
                    labels[order[start + static_cast<std::size_t>(r)]];
            }
            HeadGradients grads;
            const double loss =
                batch_loss_and_grad(result.head, batch, batch_labels, grads);
            const double lr_t = cosine_lr(t, total_steps, config.lr);
            ++t;
            adamw_step(result.head, grads, state, t, lr_t, config);
            epoch_loss += loss * static_cast<double>(batch_n);
        }
        result.epoch_losses.push_back(epoch_loss / static_cast<double>(n));
    }
    return result;
}

Metrics evaluate_head(const LinearHead& head, const Eigen::MatrixXd& Z,
                      const std::vector<int>& labels) {
    if (static_cast<std::size_t>(Z.rows()) != labels.size())
        throw std::invalid_argument("label count does not match representations");
    Metrics m;
    std::size_t correct = 0;
    for (Eigen::Index i = 0; i < Z.rows(); ++i) {
        const Eigen::VectorXd y = logits(head, Z.row(i).transpose());
        const int pred = y[1] > y[0] ? 1 : 0;
        const int truth = labels[static_cast<std::size_t>(i)];
        ++m.confusion[static_cast<std::size_t>(truth)][static_cast<std::size_t>(pred)];
        if (pred == truth) ++correct;
    }
    m.test_accuracy =
        Z.rows() == 0 ? 0.0 : static_cast<double>(correct) / Z.rows();
    for (int c = 0; c < 2; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        const double col = static_cast<double>(m.confusion[0][cu] + m.confusion[1][cu]);
        const double row = static_cast<double>(m.confusion[cu][0] + m.confusion[cu][1]);
        m.precision[cu] = col > 0 ? m.confusion[cu][cu] / col : 0.0;
        m.recall[cu] = row > 0 ? m.confusion[cu][cu] / row : 0.0;
    }
    return m;
}

double accuracy(const std::vector<int>& predictions,
                const std::vector<int>& labels) {
    if (predictions.size() != labels.size())
        throw std::invalid_argument("prediction and label counts differ");
    if (predictions.empty()) return 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        if (predictions[i] == labels[i]) ++correct;
    return static_cast<double>(correct) / predictions.size();
}

LinearEvalResult linear_evaluate(const Eigen::MatrixXd& train_z,
                                 const std::vector<int>& train_labels,
                                 const Eigen::MatrixXd& test_z,
                                 const std::vector<int>& test_labels,
                                 const std::vector<double>& weight_decays,
                                 const std::vector<int>& epoch_grid,
                                 const TrainConfig& base,
                                 GridSelection selection,
                                 double validation_fraction) {
    if (train_z.rows() == 0 || test_z.rows() == 0)
        throw std::invalid_argument("both splits must be non-empty");
    if (weight_decays.empty() || epoch_grid.empty())
        throw std::invalid_argument("the configuration grid must be non-empty");

    // Optional holdout carved off the end of a seeded shuffle of train.
    Eigen::MatrixXd fit_z = train_z;
    std::vector<int> fit_labels = train_labels;
    Eigen::MatrixXd val_z;
    std::vector<int> val_labels;
    if (selection == GridSelection::kValidationSplit) {
        const auto n = static_cast<std::size_t>(train_z.rows());
        auto n_val = static_cast<std::size_t>(
            std::llround(validation_fraction * static_cast<double>(n)));
        n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::mt19937_64 rng(base.seed ^ 0x9E3779B97F4A7C15ull);
        for (std::size_t i = n - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
            std::swap(order[i], order[j]);
        }
        const std::size_t n_fit = n - n_val;
        fit_z.resize(static_cast<Eigen::Index>(n_fit), train_z.cols());
        val_z.resize(static_cast<Eigen::Index>(n_val), train_z.cols());
        fit_labels.resize(n_fit);
        val_labels.resize(n_val);
        for (std::size_t i = 0; i < n_fit; ++i) {
            fit_z.row(static_cast<Eigen::Index>(i)) =
                train_z.row(static_cast<Eigen::Index>(order[i]));
            fit_labels[i] = train_labels[order[i]];
        }
        for (std::size_t i = 0; i < n_val; ++i) {
            val_z.row(static_cast<Eigen::Index>(i)) =
                train_z.row(static_cast<Eigen::Index>(order[n_fit + i]));
            val_labels[i] = train_labels[order[n_fit + i]];
        }
    }

    LinearEvalResult result;
    double best_score = -1.0;
    for (double wd : weight_decays) {
        for (int epochs : epoch_grid) {
            TrainConfig config = base;
            config.weight_decay = wd;
            config.epochs = epochs;
            TrainResult trained = train_head(fit_z, fit_labels, config);
            Metrics metrics = evaluate_head(trained.head, test_z, test_labels);
            metrics.weight_decay = wd;
            metrics.epochs = epochs;

            double score = metrics.test_accuracy;
            if (selection == GridSelection::kValidationSplit)
                score = evaluate_head(trained.head, val_z, val_labels).test_accuracy;

            if (score > best_score) {
                best_score = score;
                result.best_index = result.grid.size();
                result.best_head = trained.head;
            }
            result.grid.push_back(metrics);
        }
    }
    return result;
}

void save_head(const LinearHead& head, const TrainConfig& config,
               const std::string& path) {
    nlohmann::json j;
    std::vector<std::vector<double>> w(static_cast<std::size_t>(head.W.rows()));
    for (Eigen::Index c = 0; c < head.W.rows(); ++c)
        for (Eigen::Index k = 0; k < head.W.cols(); ++k)
            w[static_cast<std::size_t>(c)].push_back(head.W(c, k));
    j["W"] = w;
    j["b"] = std::vector<double>(head.b.data(), head.b.data() + head.b.size());
    j["dim"] = head.dim();
    j["classes"] = head.classes();
    j["config"] = {{"lr", config.lr},
                   {"batch_size", config.batch_size},
                   {"weight_decay", config.weight_decay},
                   {"epochs", config.epochs},
                   {"beta1", config.beta1},
                   {"beta2", config.beta2},
                   {"eps", config.eps}};
    j["seed"] = config.seed;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write head file: " + path);
    out << j.dump(2) << "\n";
}

LinearHead load_head(const std::string& path, TrainConfig* config) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open head file: " + path);
    nlohmann::json j;
    try {
        in >> j;
        const auto w = j.at("W").get<std::vector<std::vector<double>>>();
        const auto b = j.at("b").get<std::vector<double>>();
        const int dim = j.at("dim").get<int>();
        const int classes = j.at("classes").get<int>();
        if (static_cast<int>(w.size()) != classes ||
            static_cast<int>(b.size()) != classes)
            throw FormatError("head file dimensions are inconsistent: " + path);
        LinearHead head;
        head.W.resize(classes, dim);
        for (int c = 0; c < classes; ++c) {
            if (static_cast<int>(w[static_cast<std::size_t>(c)].size()) != dim)
                throw FormatError("head file dimensions are inconsistent: " + path);
            for (int k = 0; k < dim; ++k)
                head.W(c, k) = w[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
        }
        head.b = Eigen::Map<const Eigen::VectorXd>(b.data(),
                                                   static_cast<Eigen::Index>(b.size()));
        if (config) {
            const auto& c = j.at("config");
            config->lr = c.at("lr").get<double>();
            config->batch_size = c.at("batch_size").get<int>();
            config->weight_decay = c.at("weight_decay").get<double>();
            config->epochs = c.at("epochs").get<int>();
            config->beta1 = c.at("beta1").get<double>();
            config->beta2 = c.at("beta2").get<double>();
            config->eps = c.at("eps").get<double>();
            config->seed = j.at("seed").get<std::uint64_t>();
        }
        return head;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("malformed head file: " + std::string(e.what()));
    }
}

}  // namespace newslens
