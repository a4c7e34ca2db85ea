#include <doctest.h>

#include <cmath>

#include "nomsdm/neurons.hpp"

using namespace nomsdm;

namespace {

LifParams plain_lif() { return LifParams{}; }

/// Forward-Euler LIF with a fine step, independent of the exact-update code.
double euler_first_spike(double j, double tau_rc, double fine_dt)
{
    double v = 0.0;
    for (int k = 1; k < 10000000; ++k) {
        v += fine_dt * (j - v) / tau_rc;
        if (v >= 1.0) {
            return k * fine_dt;
        }
    }
    return -1.0;
}

} // namespace

TEST_CASE("neuron names parse and print")
{
    for (auto kind : {NeuronKind::lif, NeuronKind::adaptive_lif, NeuronKind::spiking_relu, NeuronKind::izhikevich}) {
        CHECK(parse_neuron_kind(to_string(kind)) == kind);
        CHECK(kind_of(default_model(kind)) == kind);
    }
    CHECK_THROWS_AS(parse_neuron_kind("hodgkin"), InvalidInput);
    CHECK(default_max_rate(NeuronKind::izhikevich) == 10.0);
}

TEST_CASE("validate rejects broken parameters")
{
    LifParams bad;
    bad.tau_rc = 0.0;
    CHECK_THROWS_AS(validate(NeuronModel(bad)), InvalidInput);
    SpikingReluParams relu;
    relu.gain = -1.0;
    CHECK_THROWS_AS(validate(NeuronModel(relu)), InvalidInput);
    IzhikevichParams izh;
    izh.c = 40.0;
    CHECK_THROWS_AS(validate(NeuronModel(izh)), InvalidInput);
}

TEST_CASE("step rejects non-finite input and non-positive dt")
{
    const NeuronModel m = plain_lif();
    CHECK_THROWS_AS(step(m, resting_state(m), std::nan(""), 1e-3), NumericError);
    CHECK_THROWS_AS(step(m, resting_state(m), 1.0, 0.0), InvalidInput);
}

TEST_CASE("LIF first spike matches the closed form")
{
    const NeuronModel m = plain_lif();
    // tau_rc * ln(J / (J - 1)) for tau_rc = 20 ms.
    const std::vector<double> j{2.0, 3.0};
    const auto t = simulate_first_spikes(m, j, 0.15, 1e-3);
    CHECK(t.crossing[0] == doctest::Approx(0.013862943611198907).epsilon(1e-12));
    CHECK(t.crossing[1] == doctest::Approx(0.008109302162163289).epsilon(1e-12));
    CHECK(*t.times[0] == doctest::Approx(0.014));
    CHECK(*t.times[1] == doctest::Approx(0.009));
    // Independent fine-step Euler integration.
    CHECK(euler_first_spike(2.0, 0.02, 1e-5) == doctest::Approx(0.01386).epsilon(1e-3));
    CHECK(euler_first_spike(3.0, 0.02, 1e-5) == doctest::Approx(0.00811).epsilon(1e-3));
}

TEST_CASE("sub-threshold LIF never fires")
{
    const NeuronModel m = plain_lif();
    const std::vector<double> j{0.0, 0.5, 1.0};
    const auto t = simulate_first_spikes(m, j, 0.5, 1e-3);
    for (std::size_t i = 0; i < j.size(); ++i) {
        CHECK_FALSE(t.times[i].has_value());
        CHECK(std::isinf(t.crossing[i]));
    }
    CHECK(lif_rate(plain_lif(), 1.0) == 0.0);
}

TEST_CASE("LIF rate obeys the refractory ceiling")
{
    const auto p = plain_lif();
    CHECK(lif_rate(p, 1e6) < 1.0 / p.tau_ref);
    CHECK(lif_rate(p, 2.0) == doctest::Approx(1.0 / (0.002 + 0.02 * std::log(2.0))));
}

TEST_CASE("LIF calibration is analytic")
{
    const auto m = calibrate_gain(NeuronKind::lif, 100.0);
    const auto& p = std::get<LifParams>(m);
    CHECK(p.gain == doctest::Approx(3.0332447817197363).epsilon(1e-12));
    CHECK(steady_rate(m, 1.0) == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(steady_rate(m, 0.0) == 0.0);
    CHECK_THROWS_AS(calibrate_gain(NeuronKind::lif, 600.0), CalibrationError);
    CHECK_THROWS_AS(calibrate_gain(NeuronKind::lif, 0.0), InvalidInput);
}

TEST_CASE("every model calibrates to its maximum rate")
{
    for (auto kind : {NeuronKind::adaptive_lif, NeuronKind::spiking_relu, NeuronKind::izhikevich}) {
        CAPTURE(to_string(kind));
        const double r = default_max_rate(kind);
        const auto m = calibrate_gain(kind, r);
        CHECK(steady_rate(m, 1.0) == doctest::Approx(r).epsilon(0.01));
        CHECK(steady_rate(m, 0.0) == 0.0);
    }
}

TEST_CASE("spiking ReLU rate is linear in the input")
{
    const auto m = calibrate_gain(NeuronKind::spiking_relu, 50.0);
    CHECK(steady_rate(m, 0.5) == doctest::Approx(25.0).epsilon(0.04));
    CHECK(steady_rate(m, 2.0) == doctest::Approx(100.0).epsilon(0.01));
}

TEST_CASE("Izhikevich tonic neuron")
{
    const auto m = calibrate_gain(NeuronKind::izhikevich, 10.0);
    CHECK(std::get<IzhikevichParams>(m).current_scale == doctest::Approx(4.7816).epsilon(1e-3));
    const std::vector<double> x{1.0, 0.5};
    const auto t = simulate_first_spikes(m, x, 0.15, 1e-3);
    REQUIRE(t.times[0].has_value());
    CHECK(t.crossing[0] == doctest::Approx(0.00785).epsilon(0.02));
    CHECK_FALSE(t.times[1].has_value());
    const auto rest = resting_state(m);
    CHECK(rest.v == -65.0);
    CHECK(rest.u_or_adapt == doctest::Approx(-13.0));
}

TEST_CASE("adaptive LIF fires slower than plain LIF under sustained drive")
{
    const auto base = plain_lif();
    AdaptiveLifParams alif;
    alif.base = base;
    alif.adapt_increment = 0.2;
    alif.tau_adapt = 0.1;
    const double plain = simulated_rate(NeuronModel(base), 3.0, 2.0, 1e-4);
    const double adapted = simulated_rate(NeuronModel(alif), 3.0, 2.0, 1e-4);
    CHECK(adapted < plain);
    // The first spike happens before any adaptation.
    const std::vector<double> j{3.0};
    CHECK(simulate_first_spikes(NeuronModel(alif), j, 0.15, 1e-3).crossing[0]
          == doctest::Approx(simulate_first_spikes(NeuronModel(base), j, 0.15, 1e-3).crossing[0]));
}

TEST_CASE("stronger drive never fires later")
{
    for (auto kind : {NeuronKind::lif, NeuronKind::adaptive_lif, NeuronKind::spiking_relu, NeuronKind::izhikevich}) {
        CAPTURE(to_string(kind));
        const auto m = calibrate_gain(kind, default_max_rate(kind));
        std::vector<double> drives;
        for (int k = 0; k < 60; ++k) {
            drives.push_back(0.9 + 0.15 * k);
        }
        const auto t = simulate_first_spikes(m, drives, 0.15, 1e-3);
        for (std::size_t i = 1; i < drives.size(); ++i) {
            CHECK(t.crossing[i] <= t.crossing[i - 1]);
        }
    }
}

TEST_CASE("first-spike decode picks the strongest drives and pads by tie rule")
{
    const auto m = calibrate_gain(NeuronKind::lif, 100.0);
    const std::vector<double> drives{0.0, 2.0, 0.0, 5.0, 1.5, 0.0};
    const auto full = decode_first_spikes(simulate_first_spikes(m, drives, 0.15, 1e-3), 3);
    CHECK(full.code == make_code({1, 3, 4}, 6));
    CHECK_FALSE(full.underfired);

    const auto padded = first_spike_decode(m, drives, 5, 0.15, 1e-3);
    CHECK(padded.underfired);
    CHECK(padded.fired == 3);
    CHECK(padded.code == make_code({0, 1, 2, 3, 4}, 6));

    const std::vector<double> silent(8, 0.0);
    const auto none = first_spike_decode(m, silent, 2, 0.15, 1e-3);
    CHECK(none.underfired);
    CHECK(none.code == make_code({0, 1}, 8));
    CHECK_THROWS_AS(first_spike_decode(m, silent, 9, 0.15, 1e-3), InvalidCode);
}

TEST_CASE("early-stop decode equals full simulation")
{
    Rng rng(8);
    for (auto kind : {NeuronKind::lif, NeuronKind::spiking_relu, NeuronKind::izhikevich}) {
        const auto m = calibrate_gain(kind, default_max_rate(kind));
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> drives(40);
            for (auto& d : drives) {
                d = rng.uniform_index(4) == 0 ? 0.0 : 3.0 * rng.uniform01();
            }
            const std::size_t count = 1 + rng.uniform_index(20);
            const auto tie = TieRule::seeded_random(trial);
            const auto full = decode_first_spikes(simulate_first_spikes(m, drives, 0.15, 1e-3), count, tie);
            const auto fast = first_spike_decode(m, drives, count, 0.15, 1e-3, tie);
            CHECK(full.code == fast.code);
            CHECK(full.underfired == fast.underfired);
        }
    }
}

TEST_CASE("exactly equal drives tie and follow the tie rule")
{
    const auto m = calibrate_gain(NeuronKind::lif, 100.0);
    const std::vector<double> drives(10, 2.0);
    CHECK(first_spike_decode(m, drives, 3, 0.15, 1e-3).code == make_code({0, 1, 2}, 10));
    const auto tie = TieRule::seeded_random(5);
    CHECK(first_spike_decode(m, drives, 3, 0.15, 1e-3, tie).code
          == top_n_decode(Eigen::VectorXd::Zero(10), 3, tie));
}

TEST_CASE("modulated drive delays the first spike")
{
    const auto m = calibrate_gain(NeuronKind::lif, 100.0);
    const std::vector<double> drives{2.0};
    const std::vector<double> half(150, 0.5);
    const auto plain = simulate_first_spikes(m, drives, 0.15, 1e-3);
    const auto slowed = simulate_first_spikes(m, drives, 0.15, 1e-3, half);
    CHECK(slowed.crossing[0] > plain.crossing[0]);
    const std::vector<double> short_profile{1.0};
    // Missing modulation entries count as zero.
    const std::vector<double> weak{0.5};
    CHECK_FALSE(simulate_first_spikes(m, weak, 0.15, 1e-3, short_profile).times[0].has_value());
}

TEST_CASE("spike_train counts match the rate")
{
    const auto m = calibrate_gain(NeuronKind::lif, 100.0);
    const auto train = spike_train(m, 1.0, 1.0, 1e-3);
    int total = 0;
    for (int c : train) {
        total += c;
    }
    CHECK(std::abs(total - 100) <= 1);
}
