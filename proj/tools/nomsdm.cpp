// Command-line front end: capacity sweeps, the MNIST experiment and neuron
// response curves.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nomsdm/capacity.hpp"
#include "nomsdm/config_json.hpp"
#include "nomsdm/mnist.hpp"
#include "nomsdm/neurons.hpp"
#include "nomsdm/parallel.hpp"
#include "nomsdm/weight_io.hpp"

namespace fs = std::filesystem;
using namespace nomsdm;

namespace {

constexpr int exit_config = 2;
constexpr int exit_numeric = 3;
constexpr int exit_io = 4;

/// Flags shared by the spiking memory of both experiment subcommands. Unset
/// flags leave the configured value alone.
struct SpikingFlags {
    std::optional<std::string> neuron, rule, weight_bound, drive, tie;
    std::optional<double> max_rate, dt, learning_rate, f_bcm, f_oja, f1, f2, spike_current, rate_factor,
        read_window, write_window, izhikevich_d;
    std::optional<std::uint64_t> tie_seed;
    bool auto_scale = false;

    void add(CLI::App& app)
    {
        app.add_option("--neuron", neuron, "lif | alif | srelu | izhikevich");
        app.add_option("--rule", rule, "bcm | oja");
        app.add_option("--max-rate", max_rate, "neuron rate at unit input, spikes/s");
        app.add_option("--dt", dt, "simulation step, s");
        app.add_option("--read-window", read_window, "s");
        app.add_option("--write-window", write_window, "s");
        app.add_option("--learning-rate", learning_rate, "0 calibrates from the target weight");
        app.add_option("--f-bcm", f_bcm);
        app.add_option("--f-oja", f_oja);
        app.add_option("--f1", f1, "address decoder scaling");
        app.add_option("--f2", f2, "SDM data memory amplification");
        app.add_option("--spike-current", spike_current);
        app.add_option("--rate-factor", rate_factor);
        app.add_option("--weight-bound", weight_bound, "binary | none");
        app.add_option("--drive", drive, "rate-current | spike-synapse");
        app.add_option("--tie", tie, "lowest | seeded");
        app.add_option("--tie-seed", tie_seed);
        app.add_option("--izhikevich-d", izhikevich_d);
        app.add_flag("--auto-scale", auto_scale, "rescale read drives to a p95 of 8");
    }

    void apply(SpikingMemoryConfig& s) const
    {
        if (neuron) s.neuron = parse_neuron_kind(*neuron);
        if (rule) s.rule = parse_rule_kind(*rule);
        if (max_rate) s.max_rate = *max_rate;
        if (dt) s.dt = *dt;
        if (read_window) s.read_window = *read_window;
        if (write_window) s.write_window = *write_window;
        if (learning_rate) s.learning_rate = *learning_rate;
        if (f_bcm) s.f_bcm = *f_bcm;
        if (f_oja) s.f_oja = *f_oja;
        if (f1) s.f1 = *f1;
        if (f2) s.f2 = *f2;
        if (spike_current) s.spike_current = *spike_current;
        if (rate_factor) s.rate_factor = *rate_factor;
        if (weight_bound) s.weight_bound = parse_weight_bound(*weight_bound);
        if (drive) s.drive_mode = parse_drive_mode(*drive);
        if (izhikevich_d) s.izhikevich_d = *izhikevich_d;
        if (auto_scale) s.auto_scale_drive = true;
        if (tie || tie_seed) {
            const std::string name = tie.value_or(s.tie.is_seeded() ? "seeded" : "lowest");
            if (name == "lowest") {
                s.tie = TieRule::lowest_index();
            } else if (name == "seeded") {
                s.tie = TieRule::seeded_random(tie_seed.value_or(s.tie.seed()));
            } else {
                throw InvalidInput("--tie must be 'lowest' or 'seeded'");
            }
        }
    }
};

struct ArchFlags {
    std::optional<std::size_t> A, D, W, n, w, d, a;

    void add(CLI::App& app)
    {
        app.add_option("--A", A, "address length");
        app.add_option("--D", D, "data length");
        app.add_option("--W", W, "address decoder size");
        app.add_option("--n", n, "active bits per address");
        app.add_option("--w", w, "decoder winners");
        app.add_option("--d", d, "active bits per data word");
        app.add_option("--a", a, "active inputs per decoder row");
    }

    void apply(SdmConfig& c) const
    {
        if (A) c.address_size = *A;
        if (D) c.data_size = *D;
        if (W) c.decoder_size = *W;
        if (n) c.address_weight = *n;
        if (w) c.decoder_winners = *w;
        if (d) c.data_weight = *d;
        if (a) c.decoder_row_weight = *a;
    }
};

struct Common {
    std::optional<std::string> config_path;
    std::string out;
    std::optional<std::string> plot;
    unsigned threads = 0;
    int verbose = 0;
    bool force = false;
};

std::string load_config_text(const std::optional<std::string>& path)
{
    if (!path) {
        return "{}";
    }
    return config_text_from_file(read_file(*path));
}

fs::path seed_path(const fs::path& out, std::uint64_t seed)
{
    fs::path p = out;
    p.replace_filename(out.stem().string() + ".seed" + std::to_string(seed) + ".csv");
    return p;
}

int run_capacity(const Common& common, const ArchFlags& arch, const SpikingFlags& spiking,
                 const std::optional<std::string>& memory, const std::optional<std::string>& mode,
                 const std::optional<std::size_t>& pairs_max, const std::optional<std::size_t>& step,
                 const std::optional<std::size_t>& seeds, const std::optional<std::uint64_t>& seed_base)
{
    SweepConfig base;
    base.pairs_max = 0; // resolved below from the memory kind when nothing sets it
    SweepConfig cfg = parse_sweep_config(load_config_text(common.config_path), base);
    if (memory) cfg.memory = parse_memory_kind(*memory);
    if (mode) cfg.mode = parse_memory_mode(*mode);
    arch.apply(cfg.arch);
    spiking.apply(cfg.spiking);
    if (pairs_max) cfg.pairs_max = *pairs_max;
    if (step) cfg.checkpoint_step = *step;
    if (seeds) cfg.seeds = *seeds;
    if (seed_base) cfg.seed_base = *seed_base;
    if (cfg.pairs_max == 0) {
        cfg.pairs_max = cfg.memory == MemoryKind::sdm ? 1200 : 800;
    }
    cfg.validate();

    if (cfg.memory == MemoryKind::sdm && cfg.mode == MemoryMode::spiking && cfg.spiking.rule == RuleKind::oja) {
        std::cerr << "warning: no SDM amplification is known for the Oja rule; f2 is used unchanged\n";
        if (!common.force) {
            std::cerr << "error: pass --force to run an SDM with the Oja rule\n";
            return exit_config;
        }
    }

    const unsigned threads = resolve_threads(common.threads);
    ProgressFn progress;
    if (common.verbose > 0) {
        progress = [](std::uint64_t seed, const CurvePoint& p) {
            std::fprintf(stderr, "seed %llu: %zu written, %zu recalled\n", static_cast<unsigned long long>(seed),
                         p.pairs_written, p.pairs_recalled);
        };
    }
    const auto curves = run_capacity_sweeps(cfg, threads, progress);

    const fs::path out(common.out);
    std::vector<std::string> labels;
    for (const auto& c : curves) {
        emit_csv(c, seed_path(out, c.seed));
        labels.push_back("seed " + std::to_string(c.seed));
        const auto s = summarize(c);
        std::cout << "seed " << c.seed << ": perfect until " << s.perfect_until << ", peak "
                  << s.peak_pairs_recalled << " at " << s.peak_location << "\n";
    }
    write_file(out, format_mean_csv(curves, sweep_config_json(cfg)));
    if (common.plot) {
        emit_plot(curves, labels, *common.plot);
    }
    return 0;
}

int run_mnist(const Common& common, const ArchFlags& arch, const SpikingFlags& spiking,
              const std::optional<std::string>& data_dir, const std::optional<std::string>& images,
              const std::optional<std::string>& labels, const std::optional<std::string>& mode,
              const std::optional<std::size_t>& count, const std::optional<std::size_t>& step,
              const std::optional<std::string>& encoder, const std::optional<std::uint64_t>& encoder_seed,
              const std::optional<std::uint64_t>& seed, const std::optional<std::uint64_t>& shuffle_seed)
{
    MnistConfig cfg = parse_mnist_config(load_config_text(common.config_path));
    if (mode) cfg.mode = parse_memory_mode(*mode);
    arch.apply(cfg.arch);
    spiking.apply(cfg.spiking);
    if (count) cfg.count = *count;
    if (step) cfg.checkpoint_step = *step;
    if (encoder) cfg.encoder = parse_encoder_kind(*encoder);
    if (encoder_seed) cfg.encoder_seed = *encoder_seed;
    if (seed) cfg.seed = *seed;
    if (shuffle_seed) cfg.shuffle_seed = *shuffle_seed;
    if (data_dir) cfg.data_dir = *data_dir;
    cfg.validate();

    IdxPaths paths;
    if (images || labels) {
        if (!images || !labels) {
            throw InvalidInput("--images and --labels must be given together");
        }
        paths = {*images, *labels};
    } else if (!cfg.data_dir.empty()) {
        paths = find_idx_files(cfg.data_dir);
    } else {
        throw InvalidInput("mnist needs --data-dir or --images/--labels");
    }
    std::vector<MnistRecord> dataset;
    try {
        dataset = load_idx(paths.images, paths.labels);
    } catch (const IoError& e) {
        throw FormatError(e.what());
    }

    std::function<void(const CurvePoint&)> progress;
    if (common.verbose > 0) {
        progress = [](const CurvePoint& p) {
            std::fprintf(stderr, "%zu written, %zu recalled\n", p.pairs_written, p.pairs_recalled);
        };
    }
    const auto result = run_mnist_experiment(cfg, dataset, resolve_threads(common.threads), progress);
    emit_csv(result.curve, common.out);
    const auto s = summarize(result.curve);
    std::cout << "perfect until " << s.perfect_until << ", final recall "
              << format_number(result.curve.points.back().recall_fraction) << ", code collisions "
              << result.code_collisions << " (" << result.conflicting_collisions << " with another label)\n";
    if (common.plot) {
        const std::vector<std::string> plot_labels{"MNIST, W=" + std::to_string(cfg.arch.decoder_size)};
        emit_plot(std::span(&result.curve, 1), plot_labels, *common.plot);
    }
    return 0;
}

int run_neurons(const std::string& model, const std::optional<double>& max_rate, const std::string& out)
{
    const auto kind = parse_neuron_kind(model);
    const double rate = max_rate.value_or(default_max_rate(kind));
    const auto calibrated = calibrate_gain(kind, rate);
    nlohmann::json echo = {{"model", std::string(to_string(kind))}, {"max-rate", rate}};
    std::string text = "# config: " + echo.dump() + "\ncurrent,rate\n";
    for (int k = 0; k <= 40; ++k) {
        const double current = k * 0.05;
        text += format_number(current) + "," + format_number(steady_rate(calibrated, current)) + "\n";
    }
    write_file(out, text);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spiking and reference N-of-M associative memories"};
    app.require_subcommand(1);

    Common common;
    const auto add_common = [&](CLI::App* sub, bool experiment) {
        sub->add_option("--out", common.out, "output CSV")->required();
        if (experiment) {
            sub->add_option("--config", common.config_path, "JSON config or a previous output CSV");
            sub->add_option("--plot", common.plot, "output SVG");
            sub->add_option("--threads", common.threads, "worker threads (default: NOMSDM_THREADS or all cores)");
            sub->add_flag("-v,--verbose", common.verbose, "log every checkpoint");
        }
    };

    auto* capacity = app.add_subcommand("capacity", "capacity sweep over stored pair count");
    ArchFlags cap_arch;
    SpikingFlags cap_spiking;
    std::optional<std::string> cap_memory, cap_mode;
    std::optional<std::size_t> cap_pairs_max, cap_step, cap_seeds;
    std::optional<std::uint64_t> cap_seed_base;
    capacity->add_option("--memory", cap_memory, "cmm | sdm");
    capacity->add_option("--mode", cap_mode, "reference | spiking");
    cap_arch.add(*capacity);
    cap_spiking.add(*capacity);
    capacity->add_option("--pairs-max", cap_pairs_max, "pairs written (default 800 for cmm, 1200 for sdm)");
    capacity->add_option("--step", cap_step, "checkpoint spacing");
    capacity->add_option("--seeds", cap_seeds, "number of seeds");
    capacity->add_option("--seed-base", cap_seed_base, "first seed");
    capacity->add_flag("--force", common.force, "run combinations without published parameters");
    add_common(capacity, true);

    auto* mnist = app.add_subcommand("mnist", "MNIST image/label association through an SDM");
    ArchFlags mn_arch;
    SpikingFlags mn_spiking;
    std::optional<std::string> mn_dir, mn_images, mn_labels, mn_mode, mn_encoder;
    std::optional<std::size_t> mn_count, mn_step;
    std::optional<std::uint64_t> mn_encoder_seed, mn_seed, mn_shuffle;
    mnist->add_option("--data-dir", mn_dir, "directory holding IDX image and label files");
    mnist->add_option("--images", mn_images, "IDX image file");
    mnist->add_option("--labels", mn_labels, "IDX label file");
    mnist->add_option("--mode", mn_mode, "reference | spiking");
    mn_arch.add(*mnist);
    mn_spiking.add(*mnist);
    mnist->add_option("--count", mn_count, "images stored");
    mnist->add_option("--step", mn_step, "checkpoint spacing");
    mnist->add_option("--encoder", mn_encoder, "dense | sparse");
    mnist->add_option("--encoder-seed", mn_encoder_seed);
    mnist->add_option("--seed", mn_seed, "address decoder seed");
    mnist->add_option("--shuffle-seed", mn_shuffle, "0 keeps file order");
    add_common(mnist, true);

    auto* neurons = app.add_subcommand("neurons", "steady firing rate against input current");
    std::string model;
    std::optional<double> neuron_rate;
    neurons->add_option("--model", model, "lif | alif | srelu | izhikevich")->required();
    neurons->add_option("--max-rate", neuron_rate, "spikes/s at unit input");
    add_common(neurons, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (*capacity) {
            return run_capacity(common, cap_arch, cap_spiking, cap_memory, cap_mode, cap_pairs_max, cap_step,
                                cap_seeds, cap_seed_base);
        }
        if (*mnist) {
            return run_mnist(common, mn_arch, mn_spiking, mn_dir, mn_images, mn_labels, mn_mode, mn_count,
                             mn_step, mn_encoder, mn_encoder_seed, mn_seed, mn_shuffle);
        }
        return run_neurons(model, neuron_rate, common.out);
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return exit_io;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help() << "\n";
        return exit_config;
    }
}
