#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "nomsdm/codes.hpp"
#include "nomsdm/neurons.hpp"
#include "nomsdm/plasticity.hpp"
#include "nomsdm/reference_memory.hpp"

namespace nomsdm {

/// How input-layer firing reaches the output layer during a read.
enum class DriveMode {
    /// Constant current spike_current * rate_factor * f * sum(w) for the whole window.
    rate_current,
    /// The same drive modulated by the input layer's spike train passed
    /// through an exponential synapse and normalized by the input firing rate.
    spike_synapse,
};

/// Weight limits used during learning.
enum class WeightBound {
    /// Synapses saturate at the single-write target magnitude and are read
    /// as binary: the target once at least half-way there, otherwise 0.
    binary,
    /// Unbounded accumulation of the learning rule.
    none,
};

std::string_view to_string(DriveMode mode);
DriveMode parse_drive_mode(std::string_view name);
std::string_view to_string(WeightBound bound);
WeightBound parse_weight_bound(std::string_view name);

struct SpikingMemoryConfig {
    double write_window = 0.150;
    double read_window = 0.150;
    double dt = 0.001;
    double spike_current = 1000.0;
    double write_current = 1.0;
    double rate_factor = 1.0;
    double f_bcm = 100.0;
    double f_oja = 16.0;
    double f1 = 1.0 / 250.0; ///< address decoder weight scaling
    double f2 = 60.0;        ///< SDM data memory amplification

    NeuronKind neuron = NeuronKind::lif;
    double max_rate = 0.0; ///< 0 selects default_max_rate(neuron)
    double izhikevich_d = 8.0;

    RuleKind rule = RuleKind::bcm;
    double learning_rate = 0.0; ///< 0 calibrates against bcm_target / oja_target
    double theta_tau = 1.0;
    double oja_beta = 1.0;
    double tau_filter = 0.005;
    double bcm_target = 1e-6;
    double oja_target = 1e-5;
    WeightBound weight_bound = WeightBound::binary;
    double bound_margin = 2.0;

    DriveMode drive_mode = DriveMode::rate_current;
    double synapse_tau = 0.005;
    bool auto_scale_drive = false;
    TieRule tie;

    double resolved_max_rate() const { return max_rate > 0.0 ? max_rate : default_max_rate(neuron); }
    double target_weight() const { return rule == RuleKind::bcm ? bcm_target : oja_target; }
    double cmm_amplification() const { return rule == RuleKind::bcm ? f_bcm : f_oja; }
    /// Throws InvalidInput when a window, step, current or factor is not positive.
    void validate() const;
};

/// Calibrated neuron, learning rule and weight limits derived from a config.
struct SpikingParameters {
    NeuronModel neuron;
    LearningRule rule;
    std::optional<WeightBounds> bounds;
};

/// Calibrates the neuron to the configured maximum rate and, unless a
/// learning rate is given, picks the rate at which one co-activation from a
/// fresh state reaches the target weight (times bound_margin when weights
/// saturate).
SpikingParameters resolve_spiking_parameters(const SpikingMemoryConfig& config);

/// Activity trace of a neuron driven by `current` for the write window.
Eigen::RowVectorXd write_activity(const NeuronModel& neuron, double current,
                                  const SpikingMemoryConfig& config);

/// Spiking correlation matrix memory: current-injection write with Hebbian
/// learning, read by first-spike decoding of the output layer.
class SpikingCmm {
public:
    SpikingCmm(std::size_t input_size, std::size_t output_size, const SpikingMemoryConfig& config,
               double amplification);
    SpikingCmm(std::size_t input_size, std::size_t output_size, const SpikingMemoryConfig& config,
               double amplification, SpikingParameters params);

    /// Stand-alone CMM, amplified by f_bcm or f_oja according to the rule.
    static SpikingCmm standalone(std::size_t input_size, std::size_t output_size,
                                 const SpikingMemoryConfig& config);

    void write(const NofMCode& x, const NofMCode& y);

    /// Constant read current of every output neuron for input x.
    Eigen::VectorXd read_drives(const NofMCode& x) const;
    FirstSpikeDecode read(const NofMCode& x, std::size_t d) const;

    /// Read weights times the amplification factor; never stored. Read
    /// weights are the raw weights, binarized in WeightBound::binary mode.
    AnalogWeightMatrix<double> effective_read_weights() const;
    const AnalogWeightMatrix<double>& raw_weights() const noexcept { return weights_; }

    double amplification() const noexcept { return amplification_; }
    /// Rescales the amplification so the 95th percentile of the non-zero read
    /// drives over `probes` equals `target`. No-op when every drive is zero.
    void scale_drive_to(std::span<const NofMCode> probes, double target = 8.0);

    const NeuronModel& neuron() const noexcept { return params_.neuron; }
    const LearningRule& rule() const noexcept { return params_.rule; }
    const std::optional<WeightBounds>& bounds() const noexcept { return params_.bounds; }
    const Eigen::VectorXd& theta() const noexcept { return theta_; }
    const SpikingMemoryConfig& config() const noexcept { return config_; }
    std::size_t input_size() const noexcept { return static_cast<std::size_t>(weights_.cols()); }
    std::size_t output_size() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
    std::size_t pairs_stored() const noexcept { return pairs_stored_; }

    /// Zero weights and BCM thresholds.
    void reset();

private:
    SpikingMemoryConfig config_;
    SpikingParameters params_;
    AnalogWeightMatrix<double> weights_;
    Eigen::VectorXd theta_;
    double amplification_;
    Eigen::RowVectorXd active_trace_;
    Eigen::RowVectorXd silent_trace_;
    std::vector<double> modulation_;
    std::size_t pairs_stored_ = 0;
};

struct SdmRecall {
    NofMCode code;
    bool underfired = false; ///< either layer fired fewer neurons than requested
};

/// Spiking SDM: a fixed binary decoder scaled by f1 feeding first-w decoding,
/// followed by a SpikingCmm data memory amplified by f2.
class SpikingSdm {
public:
    SpikingSdm(BinaryWeightMatrix decoder, std::size_t winners, std::size_t data_size,
               const SpikingMemoryConfig& config);

    Eigen::VectorXd decoder_drives(const NofMCode& address) const;
    FirstSpikeDecode decode_address(const NofMCode& address) const;
    /// Returns the address decode used for storage.
    FirstSpikeDecode write(const NofMCode& address, const NofMCode& data);
    SdmRecall read(const NofMCode& address, std::size_t d) const;

    const BinaryWeightMatrix& decoder() const noexcept { return decoder_; }
    const SpikingCmm& data_memory() const noexcept { return data_; }
    SpikingCmm& data_memory() noexcept { return data_; }
    std::size_t winners() const noexcept { return winners_; }

private:
    BinaryWeightMatrix decoder_;
    std::size_t winners_;
    SpikingCmm data_;
};

} // namespace nomsdm
