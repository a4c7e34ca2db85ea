#include "nomsdm/spiking_memory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nomsdm {

std::string_view to_string(DriveMode mode)
{
    return mode == DriveMode::rate_current ? "rate-current" : "spike-synapse";
}

DriveMode parse_drive_mode(std::string_view name)
{
    if (name == "rate-current") return DriveMode::rate_current;
    if (name == "spike-synapse") return DriveMode::spike_synapse;
    throw InvalidInput("unknown drive mode '" + std::string(name) + "'");
}

std::string_view to_string(WeightBound bound)
{
    return bound == WeightBound::binary ? "binary" : "none";
}

WeightBound parse_weight_bound(std::string_view name)
{
    if (name == "binary") return WeightBound::binary;
    if (name == "none") return WeightBound::none;
    throw InvalidInput("unknown weight bound '" + std::string(name) + "'");
}

void SpikingMemoryConfig::validate() const
{
    const double positive[] = {write_window, read_window, dt,        spike_current, write_current,
                               rate_factor,  f_bcm,       f_oja,     f1,            f2,
                               theta_tau,    tau_filter,  bcm_target, oja_target,   synapse_tau,
                               bound_margin};
    for (double v : positive) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidInput("spiking memory config: windows, dt, currents and factors must be positive");
        }
    }
    if (max_rate < 0.0 || learning_rate < 0.0 || oja_beta < 0.0) {
        throw InvalidInput("spiking memory config: max_rate, learning_rate and beta must be >= 0");
    }
}

Eigen::RowVectorXd write_activity(const NeuronModel& neuron, double current,
                                  const SpikingMemoryConfig& config)
{
    const auto train = spike_train(neuron, current, config.write_window, config.dt);
    return filter_spikes(train, config.tau_filter, config.dt).values.transpose();
}

SpikingParameters resolve_spiking_parameters(const SpikingMemoryConfig& config)
{
    config.validate();
    NeuronModel base = default_model(config.neuron);
    if (auto* izh = std::get_if<IzhikevichParams>(&base)) {
        izh->d = config.izhikevich_d;
    }
    SpikingParameters out;
    out.neuron = calibrate_gain(base, config.resolved_max_rate());

    LearningRule unit_rule = config.rule == RuleKind::bcm
                                 ? LearningRule(BcmRule{1.0, config.theta_tau})
                                 : LearningRule(OjaRule{1.0, config.oja_beta});
    const double target = config.target_weight();
    if (config.weight_bound == WeightBound::binary) {
        out.bounds = WeightBounds{0.0, target};
    }
    if (config.learning_rate > 0.0) {
        out.rule = with_learning_rate(unit_rule, config.learning_rate);
        return out;
    }

    // One co-activation of a fresh synapse at unit learning rate. BCM is
    // exactly linear in the rate; Oja is linear in its Hebbian term, so the
    // forgetting term is switched off for the measurement.
    const Eigen::RowVectorXd trace = write_activity(out.neuron, config.write_current, config);
    ActivityTraces pre = trace;
    ActivityTraces post = trace;
    AnalogWeightMatrix<double> w = AnalogWeightMatrix<double>::Zero(1, 1);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(1);
    LearningRule probe = config.rule == RuleKind::bcm ? LearningRule(BcmRule{1.0, config.theta_tau})
                                                      : LearningRule(OjaRule{1.0, 0.0});
    run_write_learning(pre, post, probe, w, theta, config.dt);
    const double unit_change = w(0, 0);
    if (!(unit_change > 0.0) || !std::isfinite(unit_change)) {
        throw CalibrationError("learning rate calibration: a co-activation produced no potentiation");
    }
    const double margin = out.bounds ? config.bound_margin : 1.0;
    out.rule = with_learning_rate(unit_rule, margin * target / unit_change);
    return out;
}

SpikingCmm::SpikingCmm(std::size_t input_size, std::size_t output_size,
                       const SpikingMemoryConfig& config, double amplification)
    : SpikingCmm(input_size, output_size, config, amplification, resolve_spiking_parameters(config))
{
}

SpikingCmm::SpikingCmm(std::size_t input_size, std::size_t output_size,
                       const SpikingMemoryConfig& config, double amplification,
                       SpikingParameters params)
    : config_(config),
      params_(std::move(params)),
      weights_(AnalogWeightMatrix<double>::Zero(static_cast<Eigen::Index>(output_size),
                                                static_cast<Eigen::Index>(input_size))),
      theta_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(output_size))),
      amplification_(amplification)
{
    config_.validate();
    if (!(amplification > 0.0)) {
        throw InvalidInput("amplification must be positive");
    }
    active_trace_ = write_activity(params_.neuron, config_.write_current, config_);
    silent_trace_ = write_activity(params_.neuron, 0.0, config_);
    if (config_.drive_mode == DriveMode::spike_synapse) {
        const auto train = spike_train(params_.neuron, config_.write_current, config_.read_window,
                                       config_.dt);
        const auto syn = filter_spikes(train, config_.synapse_tau, config_.dt).values;
        const double norm = config_.resolved_max_rate();
        modulation_.resize(static_cast<std::size_t>(syn.size()));
        for (Eigen::Index k = 0; k < syn.size(); ++k) {
            modulation_[static_cast<std::size_t>(k)] = syn(k) / norm;
        }
    }
}

SpikingCmm SpikingCmm::standalone(std::size_t input_size, std::size_t output_size,
                                  const SpikingMemoryConfig& config)
{
    return SpikingCmm(input_size, output_size, config, config.cmm_amplification());
}

void SpikingCmm::write(const NofMCode& x, const NofMCode& y)
{
    if (x.m() != input_size() || y.m() != output_size()) {
        throw ShapeError("spiking_cmm_write: expected " + std::to_string(input_size()) + " -> "
                         + std::to_string(output_size()) + ", got " + std::to_string(x.m()) + " -> "
                         + std::to_string(y.m()));
    }
    const Eigen::Index steps = active_trace_.size();
    ActivityTraces pre(weights_.cols(), steps);
    ActivityTraces post(weights_.rows(), steps);
    for (Eigen::Index j = 0; j < pre.rows(); ++j) {
        pre.row(j) = x.contains(static_cast<Index>(j)) ? active_trace_ : silent_trace_;
    }
    for (Eigen::Index i = 0; i < post.rows(); ++i) {
        post.row(i) = y.contains(static_cast<Index>(i)) ? active_trace_ : silent_trace_;
    }
    run_write_learning(pre, post, params_.rule, weights_, theta_, config_.dt, params_.bounds);
    if (!weights_.allFinite()) {
        throw NumericError("spiking_cmm_write: non-finite weights");
    }
    ++pairs_stored_;
}

AnalogWeightMatrix<double> SpikingCmm::effective_read_weights() const
{
    if (!params_.bounds) {
        return weights_ * amplification_;
    }
    const double level = params_.bounds->upper;
    return weights_.unaryExpr([level](double w) { return w >= 0.5 * level ? level : 0.0; }) * amplification_;
}

Eigen::VectorXd SpikingCmm::read_drives(const NofMCode& x) const
{
    if (x.m() != input_size()) {
        throw ShapeError("spiking_cmm_read: input length " + std::to_string(x.m()) + ", expected "
                         + std::to_string(input_size()));
    }
    const bool binary = params_.bounds.has_value();
    const double level = binary ? params_.bounds->upper : 0.0;
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(weights_.rows());
    for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
        double acc = 0.0;
        for (Index j : x.active()) {
            const double w = weights_(i, static_cast<Eigen::Index>(j));
            acc += binary ? (w >= 0.5 * level ? level : 0.0) : w;
        }
        sums(i) = acc;
    }
    return sums * (config_.spike_current * config_.rate_factor * amplification_);
}

FirstSpikeDecode SpikingCmm::read(const NofMCode& x, std::size_t d) const
{
    if (d > output_size()) {
        throw InvalidCode("spiking_cmm_read: d exceeds output size");
    }
    const Eigen::VectorXd drives = read_drives(x);
    return first_spike_decode(params_.neuron, {drives.data(), static_cast<std::size_t>(drives.size())},
                              d, config_.read_window, config_.dt, config_.tie, modulation_);
}

void SpikingCmm::scale_drive_to(std::span<const NofMCode> probes, double target)
{
    std::vector<double> values;
    for (const auto& x : probes) {
        const Eigen::VectorXd drives = read_drives(x);
        for (Eigen::Index i = 0; i < drives.size(); ++i) {
            if (drives(i) > 0.0) {
                values.push_back(drives(i));
            }
        }
    }
    if (values.empty()) {
        return;
    }
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(values.size()))) - 1;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank), values.end());
    amplification_ *= target / values[rank];
}

void SpikingCmm::reset()
{
    weights_.setZero();
    theta_.setZero();
    pairs_stored_ = 0;
}

SpikingSdm::SpikingSdm(BinaryWeightMatrix decoder, std::size_t winners, std::size_t data_size,
                       const SpikingMemoryConfig& config)
    : decoder_(std::move(decoder)),
      winners_(winners),
      data_(decoder_.rows(), data_size, config, config.f2)
{
    if (winners > decoder_.rows()) {
        throw InvalidCode("SDM winner count w exceeds decoder size W");
    }
}

Eigen::VectorXd SpikingSdm::decoder_drives(const NofMCode& address) const
{
    const auto& cfg = data_.config();
    return decoder_.active_sums<double>(address) * (cfg.spike_current * cfg.rate_factor * cfg.f1);
}

FirstSpikeDecode SpikingSdm::decode_address(const NofMCode& address) const
{
    const Eigen::VectorXd drives = decoder_drives(address);
    const auto& cfg = data_.config();
    return first_spike_decode(data_.neuron(), {drives.data(), static_cast<std::size_t>(drives.size())},
                              winners_, cfg.read_window, cfg.dt, cfg.tie);
}

FirstSpikeDecode SpikingSdm::write(const NofMCode& address, const NofMCode& data)
{
    if (data.m() != data_.output_size()) {
        throw ShapeError("spiking_sdm_write: data length mismatch");
    }
    auto decoded = decode_address(address);
    data_.write(decoded.code, data);
    return decoded;
}

SdmRecall SpikingSdm::read(const NofMCode& address, std::size_t d) const
{
    const auto decoded = decode_address(address);
    const auto recalled = data_.read(decoded.code, d);
    return {recalled.code, decoded.underfired || recalled.underfired};
}

} // namespace nomsdm
