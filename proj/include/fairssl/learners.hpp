#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace fairssl {

/// gradient_descent takes fixed steps; newton runs damped Newton steps with a
/// backtracking line search (logistic regression only) and treats `epochs`
/// as an iteration cap.
enum class Optimizer : std::uint8_t { gradient_descent, newton };

Optimizer parse_optimizer(const std::string& name);
const char* to_string(Optimizer o) noexcept;

/// Full-batch training settings shared by the linear learners.
struct TrainingConfig {
    Optimizer optimizer = Optimizer::gradient_descent;
    double learning_rate = 0.1;
    int epochs = 500;
    double l2 = 1e-4;
    std::uint64_t seed = 0;
    bool record_loss = false;  // keep the per-epoch objective in loss_history

    bool operator==(const TrainingConfig&) const = default;
};

/// Anything that scores rows with P(label = 1).
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const = 0;
    virtual std::size_t dims() const = 0;
    virtual bool degenerate() const = 0;

    /// 1 where predict_proba >= 0.5.
    std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

double sigmoid(double z) noexcept;

class LogisticModel final : public Classifier {
public:
    Eigen::VectorXd weights;
    double bias = 0.0;
    TrainingConfig config;
    bool is_degenerate = false;
    std::vector<double> loss_history;

    Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const override;
    std::size_t dims() const override { return static_cast<std::size_t>(weights.size()); }
    bool degenerate() const override { return is_degenerate; }
};

/// Trains on mean log-loss + (l2/2)*|w|^2 from a zero start. When y holds a
/// single class the result is a constant model (probability 0.99 or 0.01)
/// flagged degenerate.
LogisticModel fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const TrainingConfig& config = {});

/// Objective minimized by fit_logistic. `params` is (w_1..w_d, b).
double log_loss(const Eigen::VectorXd& params, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2);

/// Analytic gradient of log_loss with respect to (w, b); the bias is not regularized.
Eigen::VectorXd log_loss_gradient(const Eigen::VectorXd& params, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                  double l2);

/// Hinge-loss linear SVM. Probabilities are sigmoid(margin), not calibrated.
class LinearSvmModel final : public Classifier {
public:
    Eigen::VectorXd weights;
    double bias = 0.0;
    TrainingConfig config;
    bool is_degenerate = false;
    double constant_proba = 0.5;

    Eigen::VectorXd decision_function(const Eigen::MatrixXd& x) const;
    Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const override;
    std::size_t dims() const override { return static_cast<std::size_t>(weights.size()); }
    bool degenerate() const override { return is_degenerate; }
};

/// Subgradient descent on mean hinge loss + (l2/2)*|w|^2.
LinearSvmModel fit_linear_svm(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const TrainingConfig& config = {});

enum class LearnerKind { logistic, linear_svm };

LearnerKind parse_learner(const std::string& name);
const char* to_string(LearnerKind kind) noexcept;

std::unique_ptr<Classifier> fit_learner(LearnerKind kind, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                        const TrainingConfig& config);

}  // namespace fairssl
