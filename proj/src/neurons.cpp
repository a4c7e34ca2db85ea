#include "nomsdm/neurons.hpp"

#include <cmath>
#include <string>

namespace nomsdm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t step_count(double window, double dt)
{
    if (!(window > 0.0) || !(dt > 0.0) || !std::isfinite(window) || !std::isfinite(dt)) {
        throw InvalidInput("window and dt must be positive and finite");
    }
    return static_cast<std::size_t>(std::llround(window / dt));
}

void require_finite(double x, const char* what)
{
    if (!std::isfinite(x)) {
        throw NumericError(std::string("non-finite ") + what);
    }
}

/// Exact LIF evolution over [0, dt) with an optional adaptation current held
/// fixed for the step.
StepOutcome lif_step(const LifParams& p, NeuronState s, double j, double dt)
{
    StepOutcome out;
    const double v_inf = p.v_rest + j;
    double t = 0.0;
    while (true) {
        const double left = dt - t;
        if (s.refractory_remaining >= left) {
            s.refractory_remaining -= left;
            break;
        }
        t += s.refractory_remaining;
        s.refractory_remaining = 0.0;
        const double h = dt - t;
        if (v_inf > p.v_threshold) {
            const double to_threshold =
                s.v >= p.v_threshold
                    ? 0.0
                    : p.tau_rc * std::log((v_inf - s.v) / (v_inf - p.v_threshold));
            if (to_threshold <= h) {
                t += to_threshold;
                if (out.spikes == 0) {
                    out.first_offset = t;
                }
                out.last_offset = t;
                ++out.spikes;
                s.v = p.v_rest;
                s.refractory_remaining = p.tau_ref;
                if (p.tau_ref <= 0.0 && to_threshold <= 0.0) {
                    break; // degenerate: cannot make progress within this step
                }
                continue;
            }
        }
        s.v = v_inf + (s.v - v_inf) * std::exp(-h / p.tau_rc);
        break;
    }
    s.spiked_this_step = out.spikes > 0;
    out.state = s;
    return out;
}

StepOutcome relu_step(const SpikingReluParams& p, NeuronState s, double x, double dt)
{
    StepOutcome out;
    const double rate = std::max(0.0, p.gain * x + p.bias);
    const double v_new = s.v + rate * dt;
    if (v_new >= 1.0) {
        const double count = std::floor(v_new);
        out.spikes = static_cast<int>(count);
        out.first_offset = (1.0 - s.v) / rate;
        out.last_offset = (count - s.v) / rate;
        s.v = v_new - count;
    } else {
        s.v = v_new;
    }
    s.spiked_this_step = out.spikes > 0;
    out.state = s;
    return out;
}

StepOutcome izhikevich_step(const IzhikevichParams& p, NeuronState s, double x, double dt)
{
    StepOutcome out;
    const double current = p.current_scale * x;
    const auto substeps = std::max<long long>(1, std::llround(dt / p.dt_internal));
    const double h_s = dt / static_cast<double>(substeps);
    const double h = h_s * 1000.0; // model time unit is 1 ms
    double v = s.v;
    double u = s.u_or_adapt;
    for (long long k = 0; k < substeps; ++k) {
        const double v_next = v + h * (0.04 * v * v + 5.0 * v + 140.0 - u + current);
        const double u_next = u + h * p.a * (p.b * v - u);
        if (!std::isfinite(v_next) || !std::isfinite(u_next)) {
            throw NumericError("izhikevich: state diverged");
        }
        if (v_next >= p.v_peak) {
            const double frac = (p.v_peak - v) / (v_next - v);
            const double offset = (static_cast<double>(k) + frac) * h_s;
            if (out.spikes == 0) {
                out.first_offset = offset;
            }
            out.last_offset = offset;
            ++out.spikes;
            v = p.c;
            u = u_next + p.d;
        } else {
            v = v_next;
            u = u_next;
        }
    }
    s.v = v;
    s.u_or_adapt = u;
    s.spiked_this_step = out.spikes > 0;
    out.state = s;
    return out;
}

LifParams& lif_part(NeuronModel& m)
{
    if (auto* p = std::get_if<LifParams>(&m)) {
        return *p;
    }
    return std::get<AdaptiveLifParams>(m).base;
}

void set_input_gain(NeuronModel& model, double gain)
{
    std::visit(Overloaded{
                   [&](LifParams& p) { p.gain = gain; p.bias = 0.0; },
                   [&](AdaptiveLifParams& p) { p.base.gain = gain; p.base.bias = 0.0; },
                   [&](SpikingReluParams& p) { p.gain = gain; p.bias = 0.0; },
                   [&](IzhikevichParams& p) { p.current_scale = gain; },
               },
               model);
}

} // namespace

std::string_view to_string(NeuronKind kind)
{
    switch (kind) {
    case NeuronKind::lif: return "lif";
    case NeuronKind::adaptive_lif: return "alif";
    case NeuronKind::spiking_relu: return "srelu";
    case NeuronKind::izhikevich: return "izhikevich";
    }
    return "?";
}

NeuronKind parse_neuron_kind(std::string_view name)
{
    if (name == "lif") return NeuronKind::lif;
    if (name == "alif") return NeuronKind::adaptive_lif;
    if (name == "srelu") return NeuronKind::spiking_relu;
    if (name == "izhikevich") return NeuronKind::izhikevich;
    throw InvalidInput("unknown neuron model '" + std::string(name) + "'");
}

double default_max_rate(NeuronKind kind)
{
    switch (kind) {
    case NeuronKind::lif:
    case NeuronKind::adaptive_lif: return 100.0;
    case NeuronKind::spiking_relu: return 50.0;
    case NeuronKind::izhikevich: return 10.0;
    }
    return 100.0;
}

NeuronKind kind_of(const NeuronModel& model)
{
    return std::visit(Overloaded{
                          [](const LifParams&) { return NeuronKind::lif; },
                          [](const AdaptiveLifParams&) { return NeuronKind::adaptive_lif; },
                          [](const SpikingReluParams&) { return NeuronKind::spiking_relu; },
                          [](const IzhikevichParams&) { return NeuronKind::izhikevich; },
                      },
                      model);
}

void validate(const NeuronModel& model)
{
    const auto check_lif = [](const LifParams& p) {
        if (!(p.tau_rc > 0.0) || !(p.tau_ref >= 0.0) || !(p.v_threshold > p.v_rest)) {
            throw InvalidInput("LIF requires tau_rc > 0, tau_ref >= 0, v_threshold > v_rest");
        }
    };
    std::visit(Overloaded{
                   check_lif,
                   [&](const AdaptiveLifParams& p) {
                       check_lif(p.base);
                       if (!(p.tau_adapt > 0.0) || !(p.adapt_increment >= 0.0)) {
                           throw InvalidInput("adaptive LIF requires tau_adapt > 0, adapt_increment >= 0");
                       }
                   },
                   [](const SpikingReluParams& p) {
                       if (!(p.gain > 0.0)) {
                           throw InvalidInput("spiking ReLU requires gain > 0");
                       }
                   },
                   [](const IzhikevichParams& p) {
                       if (!(p.a > 0.0) || !(p.c < p.v_peak) || !(p.dt_internal > 0.0)) {
                           throw InvalidInput("Izhikevich requires a > 0, c < v_peak, dt_internal > 0");
                       }
                   },
               },
               model);
}

NeuronModel default_model(NeuronKind kind)
{
    switch (kind) {
    case NeuronKind::lif: return LifParams{};
    case NeuronKind::adaptive_lif: return AdaptiveLifParams{};
    case NeuronKind::spiking_relu: return SpikingReluParams{};
    case NeuronKind::izhikevich: return IzhikevichParams{};
    }
    return LifParams{};
}

NeuronState resting_state(const NeuronModel& model)
{
    return std::visit(Overloaded{
                          [](const LifParams& p) { return NeuronState{p.v_rest, 0.0, 0.0, false}; },
                          [](const AdaptiveLifParams& p) {
                              return NeuronState{p.base.v_rest, 0.0, 0.0, false};
                          },
                          [](const SpikingReluParams&) { return NeuronState{}; },
                          [](const IzhikevichParams& p) {
                              return NeuronState{p.c, p.b * p.c, 0.0, false};
                          },
                      },
                      model);
}

StepOutcome step(const NeuronModel& model, const NeuronState& state, double input, double dt)
{
    require_finite(input, "input current");
    if (!(dt > 0.0)) {
        throw InvalidInput("step: dt must be positive");
    }
    return std::visit(Overloaded{
                          [&](const LifParams& p) {
                              return lif_step(p, state, p.gain * input + p.bias, dt);
                          },
                          [&](const AdaptiveLifParams& p) {
                              const double j = p.base.gain * input + p.base.bias - state.u_or_adapt;
                              auto out = lif_step(p.base, state, j, dt);
                              out.state.u_or_adapt = state.u_or_adapt * std::exp(-dt / p.tau_adapt)
                                                     + p.adapt_increment * out.spikes;
                              return out;
                          },
                          [&](const SpikingReluParams& p) { return relu_step(p, state, input, dt); },
                          [&](const IzhikevichParams& p) {
                              return izhikevich_step(p, state, input, dt);
                          },
                      },
                      model);
}

FirstSpikeTimes simulate_first_spikes(const NeuronModel& model, std::span<const double> currents,
                                      double window, double dt, std::span<const double> modulation)
{
    const auto steps = step_count(window, dt);
    for (double c : currents) {
        require_finite(c, "input current");
    }
    FirstSpikeTimes out;
    out.window = window;
    out.dt = dt;
    out.times.assign(currents.size(), std::nullopt);
    out.crossing.assign(currents.size(), kInf);
    const NeuronState rest = resting_state(model);
    for (std::size_t i = 0; i < currents.size(); ++i) {
        NeuronState s = rest;
        for (std::size_t k = 0; k < steps; ++k) {
            const double gain = modulation.empty() ? 1.0 : (k < modulation.size() ? modulation[k] : 0.0);
            const auto r = step(model, s, currents[i] * gain, dt);
            if (r.spiked()) {
                out.times[i] = static_cast<double>(k + 1) * dt;
                out.crossing[i] = static_cast<double>(k) * dt + r.first_offset;
                break;
            }
            s = r.state;
        }
    }
    return out;
}

namespace {

FirstSpikeDecode decode_crossings(const std::vector<double>& crossing, std::size_t fired,
                                  std::size_t count, const TieRule& tie)
{
    if (count > crossing.size()) {
        throw InvalidCode("first-spike decode: requested " + std::to_string(count)
                          + " winners from " + std::to_string(crossing.size()) + " neurons");
    }
    Eigen::VectorXd key(static_cast<Eigen::Index>(crossing.size()));
    for (std::size_t i = 0; i < crossing.size(); ++i) {
        key(static_cast<Eigen::Index>(i)) = -crossing[i];
    }
    FirstSpikeDecode out;
    out.code = top_n_decode(key, count, tie);
    out.fired = fired;
    out.underfired = fired < count;
    return out;
}

} // namespace

FirstSpikeDecode decode_first_spikes(const FirstSpikeTimes& times, std::size_t count,
                                     const TieRule& tie)
{
    std::size_t fired = 0;
    for (const auto& t : times.times) {
        fired += t.has_value() ? 1 : 0;
    }
    return decode_crossings(times.crossing, fired, count, tie);
}

FirstSpikeDecode first_spike_decode(const NeuronModel& model, std::span<const double> currents,
                                    std::size_t count, double window, double dt,
                                    const TieRule& tie, std::span<const double> modulation)
{
    const auto steps = step_count(window, dt);
    for (double c : currents) {
        require_finite(c, "input current");
    }
    const std::size_t n = currents.size();
    std::vector<NeuronState> states(n, resting_state(model));
    std::vector<double> crossing(n, kInf);
    std::vector<std::size_t> pending(n);
    std::iota(pending.begin(), pending.end(), std::size_t{0});
    std::size_t fired = 0;
    for (std::size_t k = 0; k < steps && fired < count; ++k) {
        const double gain = modulation.empty() ? 1.0 : (k < modulation.size() ? modulation[k] : 0.0);
        std::size_t keep = 0;
        for (std::size_t idx = 0; idx < pending.size(); ++idx) {
            const std::size_t i = pending[idx];
            const auto r = step(model, states[i], currents[i] * gain, dt);
            if (r.spiked()) {
                crossing[i] = static_cast<double>(k) * dt + r.first_offset;
                ++fired;
            } else {
                states[i] = r.state;
                pending[keep++] = i;
            }
        }
        pending.resize(keep);
    }
    return decode_crossings(crossing, fired, count, tie);
}

std::vector<int> spike_train(const NeuronModel& model, double input, double window, double dt)
{
    const auto steps = step_count(window, dt);
    std::vector<int> counts(steps, 0);
    NeuronState s = resting_state(model);
    for (std::size_t k = 0; k < steps; ++k) {
        const auto r = step(model, s, input, dt);
        counts[k] = r.spikes;
        s = r.state;
    }
    return counts;
}

double simulated_rate(const NeuronModel& model, double input, double duration, double dt)
{
    const auto steps = step_count(duration, dt);
    const std::size_t half = steps / 2;
    NeuronState s = resting_state(model);
    std::size_t spikes = 0;
    double first = 0.0;
    double last = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const auto r = step(model, s, input, dt);
        s = r.state;
        if (k < half || !r.spiked()) {
            continue;
        }
        const double t0 = static_cast<double>(k) * dt;
        if (spikes == 0) {
            first = t0 + r.first_offset;
        }
        last = t0 + r.last_offset;
        spikes += static_cast<std::size_t>(r.spikes);
    }
    if (spikes >= 2 && last > first) {
        return static_cast<double>(spikes - 1) / (last - first);
    }
    return static_cast<double>(spikes) / (static_cast<double>(steps - half) * dt);
}

double lif_rate(const LifParams& p, double j)
{
    const double span = p.v_threshold - p.v_rest;
    if (!(j > span)) {
        return 0.0;
    }
    return 1.0 / (p.tau_ref + p.tau_rc * std::log(j / (j - span)));
}

double steady_rate(const NeuronModel& model, double input)
{
    constexpr double kFineDt = 1e-4;
    return std::visit(Overloaded{
                          [&](const LifParams& p) { return lif_rate(p, p.gain * input + p.bias); },
                          [&](const AdaptiveLifParams& p) {
                              return simulated_rate(model, input, std::max(2.0, 5.0 * p.tau_adapt),
                                                    kFineDt);
                          },
                          [&](const SpikingReluParams&) {
                              return simulated_rate(model, input, 2.0, kFineDt);
                          },
                          [&](const IzhikevichParams&) {
                              return simulated_rate(model, input, 2.0, kFineDt);
                          },
                      },
                      model);
}

NeuronModel calibrate_gain(const NeuronModel& base, double max_rate)
{
    if (!(max_rate > 0.0) || !std::isfinite(max_rate)) {
        throw InvalidInput("calibrate_gain: max_rate must be positive");
    }
    validate(base);
    NeuronModel model = base;

    if (std::holds_alternative<LifParams>(model)) {
        LifParams& p = lif_part(model);
        const double log_ratio = (1.0 / max_rate - p.tau_ref) / p.tau_rc;
        if (!(log_ratio > 0.0)) {
            throw CalibrationError("LIF cannot exceed 1/tau_ref spikes/s");
        }
        const double e = std::exp(log_ratio);
        p.gain = (p.v_threshold - p.v_rest) * e / (e - 1.0);
        p.bias = 0.0;
        return model;
    }

    const auto rate_at = [&](double gain) {
        set_input_gain(model, gain);
        return steady_rate(model, 1.0);
    };
    double lo = 0.0;
    double hi = 1.0;
    while (rate_at(hi) < max_rate) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e7) {
            throw CalibrationError("cannot reach " + std::to_string(max_rate) + " spikes/s with "
                                   + std::string(to_string(kind_of(base))));
        }
    }
    for (int it = 0; it < 80 && (hi - lo) > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rate_at(mid) < max_rate) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    set_input_gain(model, hi);
    return model;
}

NeuronModel calibrate_gain(NeuronKind kind, double max_rate)
{
    return calibrate_gain(default_model(kind), max_rate);
}

} // namespace nomsdm
