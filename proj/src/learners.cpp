#include "fairssl/learners.hpp"

#include "fairssl/error.hpp"

#include <cmath>

namespace fairssl {

namespace {

constexpr double kDegenerateHigh = 0.99;
constexpr double kDegenerateLow = 0.01;

void check_training_input(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const TrainingConfig& config) {
    if (x.rows() == 0) throw DataError("cannot fit on an empty matrix");
    if (x.rows() != y.size()) throw DataError("feature rows and label count differ");
    if (!(config.learning_rate > 0.0) || config.epochs < 0 || config.l2 < 0.0) {
        throw ConfigError("invalid training config");
    }
}

// Returns -1 if y has both classes, else the single class present.
int single_class(const Eigen::VectorXd& y) {
    const bool has_pos = (y.array() > 0.5).any();
    const bool has_neg = (y.array() <= 0.5).any();
    if (has_pos && has_neg) return -1;
    return has_pos ? 1 : 0;
}

void check_dims(const Eigen::MatrixXd& x, Eigen::Index expected) {
    if (x.cols() != expected) {
        throw DataError("model expects " + std::to_string(expected) + " features, got " + std::to_string(x.cols()));
    }
}

// log(1 + exp(z)) without overflow.
double softplus(double z) noexcept { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

double sigmoid(double z) noexcept {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

std::vector<int> Classifier::predict(const Eigen::MatrixXd& x) const {
    const Eigen::VectorXd p = predict_proba(x);
    std::vector<int> out(static_cast<std::size_t>(p.size()));
    for (Eigen::Index i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(i)] = p(i) >= 0.5 ? 1 : 0;
    return out;
}

// ---------------------------------------------------------------------------
// Logistic regression

Eigen::VectorXd LogisticModel::predict_proba(const Eigen::MatrixXd& x) const {
    check_dims(x, weights.size());
    if (is_degenerate) {
        const double p = bias > 0.0 ? kDegenerateHigh : kDegenerateLow;
        return Eigen::VectorXd::Constant(x.rows(), p);
    }
    Eigen::VectorXd z = x * weights;
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = sigmoid(z(i) + bias);
    return z;
}

double log_loss(const Eigen::VectorXd& params, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2) {
    const Eigen::Index d = x.cols();
    if (params.size() != d + 1) throw DataError("parameter vector must have d + 1 entries");
    const auto w = params.head(d);
    const double b = params(d);
    const Eigen::VectorXd z = x * w;
    double total = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double zi = z(i) + b;
        // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
        total += softplus(zi) - y(i) * zi;
    }
    return total / static_cast<double>(x.rows()) + 0.5 * l2 * w.squaredNorm();
}

Eigen::VectorXd log_loss_gradient(const Eigen::VectorXd& params, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                  double l2) {
    const Eigen::Index d = x.cols();
    if (params.size() != d + 1) throw DataError("parameter vector must have d + 1 entries");
    const auto w = params.head(d);
    const double b = params(d);
    Eigen::VectorXd residual = x * w;
    for (Eigen::Index i = 0; i < residual.size(); ++i) residual(i) = sigmoid(residual(i) + b) - y(i);
    const double inv_n = 1.0 / static_cast<double>(x.rows());
    Eigen::VectorXd grad(d + 1);
    grad.head(d) = (x.transpose() * residual) * inv_n + l2 * w;
    grad(d) = residual.sum() * inv_n;
    return grad;
}

Optimizer parse_optimizer(const std::string& name) {
    if (name == "gradient_descent" || name == "gd") return Optimizer::gradient_descent;
    if (name == "newton") return Optimizer::newton;
    throw ConfigError("unknown optimizer '" + name + "'");
}

const char* to_string(Optimizer o) noexcept { return o == Optimizer::newton ? "newton" : "gradient_descent"; }

namespace {

void fit_newton(LogisticModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const TrainingConfig& config) {
    const Eigen::Index d = x.cols();
    const Eigen::Index n = x.rows();
    const double inv_n = 1.0 / static_cast<double>(n);
    Eigen::MatrixXd xa(n, d + 1);
    xa.leftCols(d) = x;
    xa.col(d).setOnes();

    Eigen::VectorXd params = Eigen::VectorXd::Zero(d + 1);
    double loss = log_loss(params, x, y, config.l2);
    if (config.record_loss) model.loss_history.push_back(loss);
    Eigen::VectorXd p(n);
    for (int it = 0; it < config.epochs; ++it) {
        p.noalias() = xa * params;
        for (Eigen::Index i = 0; i < n; ++i) p(i) = sigmoid(p(i));
        Eigen::VectorXd grad = xa.transpose() * (p - y) * inv_n;
        grad.head(d) += config.l2 * params.head(d);
        if (grad.lpNorm<Eigen::Infinity>() < 1e-10) break;

        const Eigen::VectorXd s = (p.array() * (1.0 - p.array())).matrix();
        Eigen::MatrixXd hessian = xa.transpose() * (xa.array().colwise() * s.array()).matrix() * inv_n;
        hessian.diagonal().head(d).array() += config.l2;
        hessian.diagonal().array() += 1e-12;
        const Eigen::VectorXd step = hessian.ldlt().solve(grad);

        // Armijo backtracking keeps every accepted step a strict decrease.
        const double slope = grad.dot(step);
        double t = 1.0;
        double next = log_loss(params - step, x, y, config.l2);
        while (!(next <= loss - 1e-4 * t * slope) && t > 1e-10) {
            t *= 0.5;
            next = log_loss(params - t * step, x, y, config.l2);
        }
        if (!(next < loss)) break;
        params -= t * step;
        const double change = loss - next;
        loss = next;
        if (config.record_loss) model.loss_history.push_back(loss);
        if (change <= 1e-14 * std::max(1.0, loss)) break;
    }
    model.weights = params.head(d);
    model.bias = params(d);
}

}  // namespace

LogisticModel fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const TrainingConfig& config) {
    check_training_input(x, y, config);
    LogisticModel model;
    model.config = config;
    model.weights = Eigen::VectorXd::Zero(x.cols());
    if (int cls = single_class(y); cls >= 0) {
        model.is_degenerate = true;
        model.bias = cls == 1 ? 1.0 : -1.0;
        return model;
    }

    if (config.optimizer == Optimizer::newton) {
        fit_newton(model, x, y, config);
        return model;
    }

    const Eigen::Index d = x.cols();
    const double inv_n = 1.0 / static_cast<double>(x.rows());
    Eigen::VectorXd residual(x.rows());
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        residual.noalias() = x * model.weights;
        double loss = 0.0;
        for (Eigen::Index i = 0; i < residual.size(); ++i) {
            const double z = residual(i) + model.bias;
            if (config.record_loss) loss += softplus(z) - y(i) * z;
            residual(i) = sigmoid(z) - y(i);
        }
        if (config.record_loss) {
            model.loss_history.push_back(loss * inv_n + 0.5 * config.l2 * model.weights.squaredNorm());
        }
        Eigen::VectorXd grad_w = (x.transpose() * residual) * inv_n + config.l2 * model.weights;
        const double grad_b = residual.sum() * inv_n;
        model.weights -= config.learning_rate * grad_w;
        model.bias -= config.learning_rate * grad_b;
    }
    if (config.record_loss) {
        Eigen::VectorXd params(d + 1);
        params << model.weights, model.bias;
        model.loss_history.push_back(log_loss(params, x, y, config.l2));
    }
    return model;
}

// ---------------------------------------------------------------------------
// Linear SVM

Eigen::VectorXd LinearSvmModel::decision_function(const Eigen::MatrixXd& x) const {
    check_dims(x, weights.size());
    return (x * weights).array() + bias;
}

Eigen::VectorXd LinearSvmModel::predict_proba(const Eigen::MatrixXd& x) const {
    check_dims(x, weights.size());
    if (is_degenerate) return Eigen::VectorXd::Constant(x.rows(), constant_proba);
    Eigen::VectorXd margin = decision_function(x);
    for (Eigen::Index i = 0; i < margin.size(); ++i) margin(i) = sigmoid(margin(i));
    return margin;
}

LinearSvmModel fit_linear_svm(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const TrainingConfig& config) {
    check_training_input(x, y, config);
    LinearSvmModel model;
    model.config = config;
    model.weights = Eigen::VectorXd::Zero(x.cols());
    if (int cls = single_class(y); cls >= 0) {
        model.is_degenerate = true;
        model.constant_proba = cls == 1 ? kDegenerateHigh : kDegenerateLow;
        model.bias = cls == 1 ? 1.0 : -1.0;
        return model;
    }

    const double inv_n = 1.0 / static_cast<double>(x.rows());
    const Eigen::VectorXd sign = (2.0 * y.array() - 1.0).matrix();
    Eigen::VectorXd coeff(x.rows());
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        coeff.noalias() = x * model.weights;
        for (Eigen::Index i = 0; i < coeff.size(); ++i) {
            const double margin = sign(i) * (coeff(i) + model.bias);
            coeff(i) = margin < 1.0 ? -sign(i) : 0.0;
        }
        Eigen::VectorXd grad_w = (x.transpose() * coeff) * inv_n + config.l2 * model.weights;
        const double grad_b = coeff.sum() * inv_n;
        model.weights -= config.learning_rate * grad_w;
        model.bias -= config.learning_rate * grad_b;
    }
    return model;
}

// ---------------------------------------------------------------------------

LearnerKind parse_learner(const std::string& name) {
    if (name == "logistic" || name == "lr") return LearnerKind::logistic;
    if (name == "linear_svm" || name == "svm") return LearnerKind::linear_svm;
    throw ConfigError("unknown learner '" + name + "'");
}

const char* to_string(LearnerKind kind) noexcept {
    return kind == LearnerKind::logistic ? "logistic" : "linear_svm";
}

std::unique_ptr<Classifier> fit_learner(LearnerKind kind, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                        const TrainingConfig& config) {
    if (kind == LearnerKind::logistic) return std::make_unique<LogisticModel>(fit_logistic(x, y, config));
    return std::make_unique<LinearSvmModel>(fit_linear_svm(x, y, config));
}

}  // namespace fairssl
