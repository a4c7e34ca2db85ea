#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include <Eigen/Core>

namespace nomsdm {

template <typename Scalar = double>
using AnalogWeightMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-neuron activity over time, one row per neuron and one column per step.
using ActivityTraces = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// dw = rate * pre * post * (post - theta) * dt, with theta a low-pass of post.
struct BcmRule {
    double learning_rate = 1e-12;
    double theta_tau = 1.0;
};

/// dw = rate * (pre * post - beta * post^2 * w) * dt.
struct OjaRule {
    double learning_rate = 1e-8;
    double beta = 1.0;
};

using LearningRule = std::variant<BcmRule, OjaRule>;

enum class RuleKind { bcm, oja };

std::string_view to_string(RuleKind kind);
RuleKind parse_rule_kind(std::string_view name);
RuleKind kind_of(const LearningRule& rule);
LearningRule with_learning_rate(const LearningRule& rule, double learning_rate);
double learning_rate_of(const LearningRule& rule);
void validate(const LearningRule& rule);

/// Hard limits applied to every synapse after each learning step.
struct WeightBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Filtered activity of one neuron.
struct ActivityTrace {
    Eigen::VectorXd values;
    double tau_filter = 0.005;
};

/// First-order low-pass of a spike-count sequence,
/// y[k] = y[k-1] * (1 - dt/tau) + spikes[k] / tau, so a train at r spikes/s
/// settles around r and a single spike peaks at 1/tau.
ActivityTrace filter_spikes(std::span<const int> spike_counts, double tau_filter, double dt);

inline double bcm_step(double w, double pre, double post, double theta, double learning_rate,
                       double dt)
{
    return w + learning_rate * pre * post * (post - theta) * dt;
}

inline double oja_step(double w, double pre, double post, double learning_rate, double beta,
                       double dt)
{
    return w + learning_rate * (pre * post - beta * post * post * w) * dt;
}

/// Applies `rule` at every step to every (post i, pre j) synapse of
/// `weights` (rows = post, cols = pre). `theta` holds the BCM modification
/// threshold of every post neuron and is advanced in place; it is ignored by
/// Oja. Weights accumulate across calls. Throws ShapeError on mismatched
/// dimensions.
void run_write_learning(const ActivityTraces& pre, const ActivityTraces& post,
                        const LearningRule& rule, AnalogWeightMatrix<double>& weights,
                        Eigen::VectorXd& theta, double dt,
                        const std::optional<WeightBounds>& bounds = std::nullopt);

} // namespace nomsdm
