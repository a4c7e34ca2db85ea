#include "nomsdm/plasticity.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "nomsdm/errors.hpp"

namespace nomsdm {

std::string_view to_string(RuleKind kind)
{
    return kind == RuleKind::bcm ? "bcm" : "oja";
}

RuleKind parse_rule_kind(std::string_view name)
{
    if (name == "bcm") return RuleKind::bcm;
    if (name == "oja") return RuleKind::oja;
    throw InvalidInput("unknown learning rule '" + std::string(name) + "'");
}

RuleKind kind_of(const LearningRule& rule)
{
    return std::holds_alternative<BcmRule>(rule) ? RuleKind::bcm : RuleKind::oja;
}

LearningRule with_learning_rate(const LearningRule& rule, double learning_rate)
{
    LearningRule out = rule;
    std::visit([&](auto& r) { r.learning_rate = learning_rate; }, out);
    return out;
}

double learning_rate_of(const LearningRule& rule)
{
    return std::visit([](const auto& r) { return r.learning_rate; }, rule);
}

void validate(const LearningRule& rule)
{
    if (const auto* bcm = std::get_if<BcmRule>(&rule)) {
        if (!(bcm->learning_rate > 0.0) || !(bcm->theta_tau > 0.0)) {
            throw InvalidInput("BCM requires learning_rate > 0 and theta_tau > 0");
        }
        return;
    }
    const auto& oja = std::get<OjaRule>(rule);
    if (!(oja.learning_rate > 0.0) || !(oja.beta >= 0.0)) {
        throw InvalidInput("Oja requires learning_rate > 0 and beta >= 0");
    }
}

ActivityTrace filter_spikes(std::span<const int> spike_counts, double tau_filter, double dt)
{
    if (!(tau_filter > 0.0) || !(dt > 0.0)) {
        throw InvalidInput("filter_spikes: tau_filter and dt must be positive");
    }
    ActivityTrace trace;
    trace.tau_filter = tau_filter;
    trace.values.resize(static_cast<Eigen::Index>(spike_counts.size()));
    const double keep = std::max(0.0, 1.0 - dt / tau_filter);
    double y = 0.0;
    for (std::size_t k = 0; k < spike_counts.size(); ++k) {
        y = y * keep + static_cast<double>(spike_counts[k]) / tau_filter;
        trace.values(static_cast<Eigen::Index>(k)) = y;
    }
    return trace;
}

void run_write_learning(const ActivityTraces& pre, const ActivityTraces& post,
                        const LearningRule& rule, AnalogWeightMatrix<double>& weights,
                        Eigen::VectorXd& theta, double dt, const std::optional<WeightBounds>& bounds)
{
    if (weights.rows() != post.rows() || weights.cols() != pre.rows()) {
        throw ShapeError("run_write_learning: weights are " + std::to_string(weights.rows()) + "x"
                         + std::to_string(weights.cols()) + ", traces give "
                         + std::to_string(post.rows()) + "x" + std::to_string(pre.rows()));
    }
    if (pre.cols() != post.cols()) {
        throw ShapeError("run_write_learning: pre and post traces differ in length");
    }
    const bool is_bcm = std::holds_alternative<BcmRule>(rule);
    if (is_bcm && theta.size() != post.rows()) {
        throw ShapeError("run_write_learning: theta length does not match post population");
    }
    validate(rule);

    // Silent neurons contribute exactly zero to every update: skip them.
    std::vector<Eigen::Index> active_post;
    for (Eigen::Index i = 0; i < post.rows(); ++i) {
        if ((post.row(i).array() != 0.0).any()) {
            active_post.push_back(i);
        }
    }
    std::vector<Eigen::Index> active_pre;
    for (Eigen::Index j = 0; j < pre.rows(); ++j) {
        if ((pre.row(j).array() != 0.0).any()) {
            active_pre.push_back(j);
        }
    }
    const auto clamp = [&](double w) {
        return bounds ? std::clamp(w, bounds->lower, bounds->upper) : w;
    };

    const Eigen::Index steps = pre.cols();
    if (is_bcm) {
        const auto& r = std::get<BcmRule>(rule);
        for (Eigen::Index k = 0; k < steps; ++k) {
            for (Eigen::Index i : active_post) {
                const double y = post(i, k);
                for (Eigen::Index j : active_pre) {
                    weights(i, j) = clamp(bcm_step(weights(i, j), pre(j, k), y, theta(i),
                                                   r.learning_rate, dt));
                }
            }
            for (Eigen::Index i = 0; i < post.rows(); ++i) {
                theta(i) += (post(i, k) - theta(i)) * dt / r.theta_tau;
            }
        }
        return;
    }

    const auto& r = std::get<OjaRule>(rule);
    for (Eigen::Index k = 0; k < steps; ++k) {
        for (Eigen::Index i : active_post) {
            const double y = post(i, k);
            for (Eigen::Index j = 0; j < pre.rows(); ++j) {
                weights(i, j) =
                    clamp(oja_step(weights(i, j), pre(j, k), y, r.learning_rate, r.beta, dt));
            }
        }
    }
}

} // namespace nomsdm
