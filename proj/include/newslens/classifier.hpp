#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace newslens {

// The sole trainable object in linear evaluation; W is also the source of
// the per-class CAM weights.
struct LinearHead {
    Eigen::MatrixXd W;  // C x D
    Eigen::VectorXd b;  // C

    int classes() const { return static_cast<int>(W.rows()); }
    int dim() const { return static_cast<int>(W.cols()); }
};

struct TrainConfig {
    double lr = 1e-3;
    int batch_size = 128;
    double weight_decay = 0.0;
    int epochs = 1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t seed = 0;
};

// Uniform init in +-1/sqrt(D), zero bias, seeded.
LinearHead init_head(int dim, int classes, std::uint64_t seed);

Eigen::VectorXd logits(const LinearHead& head, const Eigen::VectorXd& z);

// Max-subtracted softmax.
Eigen::VectorXd softmax(const Eigen::VectorXd& y);

// -log softmax(y)[label].
double cross_entropy(const Eigen::VectorXd& y, int label);

struct HeadGradients {
    Eigen::MatrixXd dW;
    Eigen::VectorXd db;
};

// Mean cross-entropy over the batch and its analytic gradient:
// dW = mean over batch of (softmax(y) - onehot(label)) outer z, db likewise.
// Z holds one representation per row.
double batch_loss_and_grad(const LinearHead& head, const Eigen::MatrixXd& Z,
                           const std::vector<int>& labels,
                           HeadGradients& grads);

struct AdamState {
    Eigen::MatrixXd mW, vW;
    Eigen::VectorXd mb, vb;
};

AdamState make_adam_state(const LinearHead& head);

// One AdamW step at 1-based step index t. Decoupled weight decay
// (theta <- theta - lr_t * lambda * theta) is applied to W only, after the
// Adam update; the bias is exempt.
void adamw_step(LinearHead& head, const HeadGradients& grads, AdamState& state,
                int t, double lr_t, const TrainConfig& config);

// lr_t = 0.5 * base_lr * (1 + cos(pi * t / T)).
double cosine_lr(int step, int total_steps, double base_lr);

struct TrainResult {
    LinearHead head;
    std::vector<double> epoch_losses;  // mean per-sample loss per epoch
};

// Trains a fresh head on (Z, labels): seeded shuffle per epoch, AdamW with a
// cosine schedule over total_steps = epochs * ceil(N / batch_size); the last
// incomplete batch is kept.
TrainResult train_head(const Eigen::MatrixXd& Z, const std::vector<int>& labels,
                       const TrainConfig& config);

struct Metrics {
    double test_accuracy = 0.0;
    std::array<double, 2> precision{0.0, 0.0};
    std::array<double, 2> recall{0.0, 0.0};
    std::array<std::array<std::int64_t, 2>, 2> confusion{};  // [true][pred]
    double weight_decay = 0.0;
    int epochs = 0;
};

Metrics evaluate_head(const LinearHead& head, const Eigen::MatrixXd& Z,
                      const std::vector<int>& labels);

double accuracy(const std::vector<int>& predictions,
                const std::vector<int>& labels);

enum class GridSelection {
    kTestAccuracy,      // mirror the reported protocol: best test accuracy
    kValidationSplit,   // carve a validation split from train and select on it
};

struct LinearEvalResult {
    std::vector<Metrics> grid;
    std::size_t best_index = 0;
    LinearHead best_head;
};

// Trains one fresh seeded head per (weight_decay, epochs) grid point on the
// frozen representations and reports test metrics for each.
LinearEvalResult linear_evaluate(const Eigen::MatrixXd& train_z,
                                 const std::vector<int>& train_labels,
                                 const Eigen::MatrixXd& test_z,
                                 const std::vector<int>& test_labels,
                                 const std::vector<double>& weight_decays,
                                 const std::vector<int>& epoch_grid,
                                 const TrainConfig& base,
                                 GridSelection selection = GridSelection::kTestAccuracy,
                                 double validation_fraction = 0.1);

// JSON persistence: {W, b, dim, classes, config, seed}.
void save_head(const LinearHead& head, const TrainConfig& config,
               const std::string& path);
LinearHead load_head(const std::string& path, TrainConfig* config = nullptr);

}  // namespace newslens
