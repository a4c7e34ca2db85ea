#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "nomsdm/codes.hpp"

namespace nomsdm {

enum class NeuronKind { lif, adaptive_lif, spiking_relu, izhikevich };

std::string_view to_string(NeuronKind kind);
/// Accepts `lif`, `alif`, `srelu`, `izhikevich`. Throws InvalidInput otherwise.
NeuronKind parse_neuron_kind(std::string_view name);

/// Maximum firing rate each model is tuned to for memory experiments, spikes/s.
double default_max_rate(NeuronKind kind);

/// Leaky integrate-and-fire in normalized units: the membrane relaxes toward
/// v_rest + J with J = gain * x + bias, and fires on reaching v_threshold.
struct LifParams {
    double tau_rc = 0.020;
    double tau_ref = 0.002;
    double v_threshold = 1.0;
    double v_rest = 0.0;
    double gain = 1.0;
    double bias = 0.0;
};

/// LIF with a spike-triggered adaptation current n subtracted from J.
/// dn/dt = -n / tau_adapt; n += adapt_increment on every spike.
struct AdaptiveLifParams {
    LifParams base;
    double tau_adapt = 1.0;
    double adapt_increment = 0.01;
};

/// Integrate-to-threshold unit firing at exactly max(0, gain * x + bias) Hz.
struct SpikingReluParams {
    double gain = 1.0;
    double bias = 0.0;
};

/// Two-variable quadratic model in ms / mV units, tonic-spiking defaults.
/// The input x is mapped to I = current_scale * x.
struct IzhikevichParams {
    double a = 0.02;
    double b = 0.2;
    double c = -65.0;
    double d = 8.0;
    double v_peak = 30.0;
    double current_scale = 1.0;
    double dt_internal = 5e-5; ///< Euler sub-step, seconds
};

using NeuronModel = std::variant<LifParams, AdaptiveLifParams, SpikingReluParams, IzhikevichParams>;

NeuronKind kind_of(const NeuronModel& model);
/// Throws InvalidInput when a parameter invariant is violated.
void validate(const NeuronModel& model);
/// Uncalibrated default parameter set for a kind.
NeuronModel default_model(NeuronKind kind);

struct NeuronState {
    double v = 0.0;
    double u_or_adapt = 0.0;
    double refractory_remaining = 0.0;
    bool spiked_this_step = false;
};

NeuronState resting_state(const NeuronModel& model);

struct StepOutcome {
    NeuronState state;
    int spikes = 0;
    /// Offsets (seconds from the start of the step) of the first and last
    /// threshold crossing in this step. Only meaningful when spikes > 0.
    double first_offset = 0.0;
    double last_offset = 0.0;

    bool spiked() const noexcept { return spikes > 0; }
};

/// Advances one neuron by dt under a constant input. Throws NumericError on
/// non-finite input or state.
StepOutcome step(const NeuronModel& model, const NeuronState& state, double input, double dt);

/// First spike of every neuron in a population integrated from rest.
struct FirstSpikeTimes {
    /// End of the step in which the neuron first fired; a multiple of dt.
    std::vector<std::optional<double>> times;
    /// Interpolated threshold-crossing time; +inf when the neuron never fired.
    /// Ordering by this value resolves neurons firing within the same step.
    std::vector<double> crossing;
    double window = 0.0;
    double dt = 0.0;
};

/// Integrates every neuron independently from rest under `currents`. When
/// `modulation` is non-empty, neuron i receives currents[i] * modulation[k]
/// during step k (missing steps count as 0).
FirstSpikeTimes simulate_first_spikes(const NeuronModel& model, std::span<const double> currents,
                                      double window, double dt,
                                      std::span<const double> modulation = {});

struct FirstSpikeDecode {
    NofMCode code;
    std::size_t fired = 0;
    /// Fewer than the requested number of neurons fired within the window;
    /// the remainder was padded from silent neurons by the tie rule.
    bool underfired = false;
};

/// The `count` earliest-firing neurons. Exact ties in crossing time and
/// the padding among silent neurons follow `tie`.
FirstSpikeDecode decode_first_spikes(const FirstSpikeTimes& times, std::size_t count,
                                     const TieRule& tie = {});

/// Same result as decode_first_spikes(simulate_first_spikes(...)) but stops
/// integrating at the end of the step in which `count` neurons have fired.
FirstSpikeDecode first_spike_decode(const NeuronModel& model, std::span<const double> currents,
                                    std::size_t count, double window, double dt,
                                    const TieRule& tie = {},
                                    std::span<const double> modulation = {});

/// Spike count per step of one neuron from rest under a constant input.
std::vector<int> spike_train(const NeuronModel& model, double input, double window, double dt);

/// Firing rate measured from a simulation of `duration` seconds, using the
/// inter-spike intervals of the second half to exclude the onset transient.
double simulated_rate(const NeuronModel& model, double input, double duration, double dt);

/// Long-run firing rate. Closed form for LIF; a >= 2 s fine-step simulation
/// for the other models.
double steady_rate(const NeuronModel& model, double input);

/// Closed-form LIF rate for an effective current J (0 when J cannot reach
/// threshold).
double lif_rate(const LifParams& p, double j);

/// Parameters for which unit input fires at `max_rate` and zero input is
/// silent. LIF is solved analytically; the other models by bisection on
/// their input gain against steady_rate(). Throws CalibrationError when the
/// rate is out of reach.
NeuronModel calibrate_gain(const NeuronModel& base, double max_rate);
NeuronModel calibrate_gain(NeuronKind kind, double max_rate);

} // namespace nomsdm
