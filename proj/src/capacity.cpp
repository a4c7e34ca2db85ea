#include "nomsdm/capacity.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nomsdm/config_json.hpp"
#include "nomsdm/parallel.hpp"
#include "nomsdm/weight_io.hpp"

namespace nomsdm {

void SweepConfig::validate() const
{
    if (checkpoint_step < 1) {
        throw InvalidInput("checkpoint step must be >= 1");
    }
    if (pairs_max < checkpoint_step) {
        throw InvalidInput("pairs-max must be >= the checkpoint step");
    }
    if (seeds < 1) {
        throw InvalidInput("at least one seed is required");
    }
    if (arch.address_weight > arch.address_size || arch.data_weight > arch.data_size) {
        throw InvalidInput("code weight exceeds pattern length");
    }
    if (memory == MemoryKind::sdm
        && (arch.decoder_winners > arch.decoder_size || arch.decoder_row_weight > arch.address_size)) {
        throw InvalidInput("SDM requires w <= W and a <= A");
    }
    if (mode == MemoryMode::spiking) {
        spiking.validate();
    }
}

std::vector<std::uint64_t> SweepConfig::seed_list() const
{
    std::vector<std::uint64_t> out(seeds);
    for (std::size_t k = 0; k < seeds; ++k) {
        out[k] = seed_base + k;
    }
    return out;
}

std::vector<std::size_t> checkpoint_grid(std::size_t pairs_max, std::size_t step)
{
    if (step < 1) {
        throw InvalidInput("checkpoint step must be >= 1");
    }
    std::vector<std::size_t> grid;
    for (std::size_t p = step; p <= pairs_max; p += step) {
        grid.push_back(p);
    }
    if (grid.empty() || grid.back() != pairs_max) {
        grid.push_back(pairs_max);
    }
    return grid;
}

PairSet generate_pairs(const SweepConfig& config, std::uint64_t seed)
{
    Rng rng(Rng::derive(seed, pair_stream));
    PairSet out;
    out.addresses.reserve(config.pairs_max);
    out.data.reserve(config.pairs_max);
    for (std::size_t k = 0; k < config.pairs_max; ++k) {
        out.addresses.push_back(random_code(config.arch.address_weight, config.arch.address_size, rng));
        out.data.push_back(random_code(config.arch.data_weight, config.arch.data_size, rng));
    }
    return out;
}

std::vector<CurvePoint> run_incremental(AssociativeMemory& memory, std::span<const NofMCode> addresses,
                                        std::span<const NofMCode> data,
                                        std::span<const std::size_t> checkpoints, unsigned threads,
                                        const std::function<void(const CurvePoint&)>& progress)
{
    if (addresses.size() != data.size()) {
        throw ShapeError("run_incremental: address and data counts differ");
    }
    std::vector<CurvePoint> points;
    std::size_t written = 0;
    for (std::size_t target : checkpoints) {
        if (target > addresses.size() || target < written) {
            throw InvalidInput("run_incremental: checkpoints must be ascending and within the pair count");
        }
        try {
            for (; written < target; ++written) {
                memory.write(addresses[written], data[written]);
            }
            memory.prepare_reads(addresses.first(written));
            std::vector<unsigned char> hit(written, 0);
            std::vector<unsigned char> under(written, 0);
            parallel_for(written, threads, [&](std::size_t k) {
                const auto r = memory.read(addresses[k]);
                hit[k] = exact_match(r.code, data[k]) ? 1 : 0;
                under[k] = r.underfired ? 1 : 0;
            });
            CurvePoint pt;
            pt.pairs_written = written;
            pt.pairs_recalled = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
            const auto underfired = static_cast<std::size_t>(std::count(under.begin(), under.end(), 1));
            pt.recall_fraction = written == 0 ? 1.0
                                              : static_cast<double>(pt.pairs_recalled) / static_cast<double>(written);
            pt.underfired_rate = written == 0 ? 0.0
                                              : static_cast<double>(underfired) / static_cast<double>(written);
            points.push_back(pt);
            if (progress) {
                progress(pt);
            }
        } catch (const NumericError& e) {
            const std::size_t reached = points.empty() ? 0 : points.back().pairs_written;
            throw NumericError(std::string(e.what()) + " (last completed checkpoint: "
                               + std::to_string(reached) + " pairs)");
        }
    }
    return points;
}

CapacityCurve run_capacity_sweep(const SweepConfig& config, std::uint64_t seed, unsigned threads,
                                 const ProgressFn& progress)
{
    config.validate();
    const auto pairs = generate_pairs(config, seed);
    auto memory = make_memory(config.memory, config.mode, config.arch, config.spiking, seed);
    const auto grid = checkpoint_grid(config.pairs_max, config.checkpoint_step);
    CapacityCurve curve;
    curve.seed = seed;
    SweepConfig echo = config;
    echo.seeds = 1;
    echo.seed_base = seed;
    curve.config = sweep_config_json(echo);
    std::function<void(const CurvePoint&)> report;
    if (progress) {
        report = [&](const CurvePoint& p) { progress(seed, p); };
    }
    curve.points = run_incremental(*memory, pairs.addresses, pairs.data, grid, threads, report);
    return curve;
}

std::vector<CapacityCurve> run_capacity_sweeps(const SweepConfig& config, unsigned threads,
                                               const ProgressFn& progress)
{
    config.validate();
    const auto seeds = config.seed_list();
    std::vector<CapacityCurve> curves(seeds.size());
    const unsigned outer = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(seeds.size())));
    const unsigned inner = std::max(1u, threads / outer);
    parallel_for(seeds.size(), outer, [&](std::size_t k) {
        curves[k] = run_capacity_sweep(config, seeds[k], inner, progress);
    });
    return curves;
}

CapacitySummary summarize(const CapacityCurve& curve)
{
    if (curve.points.empty()) {
        throw InvalidInput("summarize: empty curve");
    }
    CapacitySummary s;
    for (const auto& p : curve.points) {
        if (p.pairs_recalled != p.pairs_written) {
            break;
        }
        s.perfect_until = p.pairs_written;
    }
    s.peak_pairs_recalled = curve.points.front().pairs_recalled;
    s.peak_location = curve.points.front().pairs_written;
    for (const auto& p : curve.points) {
        if (p.pairs_recalled > s.peak_pairs_recalled) {
            s.peak_pairs_recalled = p.pairs_recalled;
            s.peak_location = p.pairs_written;
        }
    }
    return s;
}

CurveDivergence compare_curves(const CapacityCurve& a, const CapacityCurve& b)
{
    if (a.points.size() != b.points.size()) {
        throw InvalidInput("compare_curves: checkpoint grids differ in length");
    }
    CurveDivergence out;
    if (a.points.empty()) {
        return out;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < a.points.size(); ++k) {
        if (a.points[k].pairs_written != b.points[k].pairs_written) {
            throw InvalidInput("compare_curves: checkpoint grids differ at position " + std::to_string(k));
        }
        const double diff = std::abs(a.points[k].recall_fraction - b.points[k].recall_fraction);
        out.max_abs = std::max(out.max_abs, diff);
        total += diff;
    }
    out.mean_abs = total / static_cast<double>(a.points.size());
    return out;
}

std::string format_number(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

namespace {

std::string header_block(std::string_view seeds_line, const std::string& config)
{
    std::string out;
    out += "# ";
    out += seeds_line;
    out += "\n# config: ";
    out += config;
    out += "\n";
    out += csv_header;
    out += "\n";
    return out;
}

template <typename T>
T parse_field(std::string_view s, std::size_t line)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw FormatError("csv line " + std::to_string(line) + ": bad field '" + std::string(s) + "'");
    }
    return value;
}

} // namespace

std::string format_csv(const CapacityCurve& curve)
{
    std::string out = header_block("seed: " + std::to_string(curve.seed), curve.config);
    for (const auto& p : curve.points) {
        out += std::to_string(p.pairs_written) + "," + std::to_string(p.pairs_recalled) + ","
               + format_number(p.recall_fraction) + "," + format_number(p.underfired_rate) + "\n";
    }
    return out;
}

CapacityCurve parse_csv(std::string_view text)
{
    CapacityCurve curve;
    bool header_seen = false;
    bool seed_seen = false;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (line.starts_with("#")) {
            if (header_seen) {
                throw FormatError("csv line " + std::to_string(line_no) + ": comment after header");
            }
            if (line.starts_with("# seed: ")) {
                curve.seed = parse_field<std::uint64_t>(line.substr(8), line_no);
                seed_seen = true;
            } else if (line.starts_with("# config: ")) {
                curve.config = std::string(line.substr(10));
            }
            continue;
        }
        if (!header_seen) {
            if (line != csv_header) {
                throw FormatError("csv line " + std::to_string(line_no) + ": expected header '"
                                  + std::string(csv_header) + "'");
            }
            header_seen = true;
            continue;
        }
        std::string_view fields[4];
        std::size_t count = 0;
        while (count < 4) {
            const auto comma = line.find(',');
            fields[count++] = line.substr(0, comma);
            if (comma == std::string_view::npos) {
                line = {};
                break;
            }
            line = line.substr(comma + 1);
        }
        if (count != 4 || !line.empty()) {
            throw FormatError("csv line " + std::to_string(line_no) + ": expected 4 fields");
        }
        CurvePoint p;
        p.pairs_written = parse_field<std::size_t>(fields[0], line_no);
        p.pairs_recalled = parse_field<std::size_t>(fields[1], line_no);
        p.recall_fraction = parse_field<double>(fields[2], line_no);
        p.underfired_rate = parse_field<double>(fields[3], line_no);
        curve.points.push_back(p);
    }
    if (!header_seen) {
        throw FormatError("csv: missing header");
    }
    if (!seed_seen) {
        throw FormatError("csv: missing '# seed:' line");
    }
    return curve;
}

void emit_csv(const CapacityCurve& curve, const std::filesystem::path& destination)
{
    write_file(destination, format_csv(curve));
}

CapacityCurve read_csv(const std::filesystem::path& source)
{
    return parse_csv(read_file(source));
}

std::vector<MeanPoint> mean_curve(std::span<const CapacityCurve> curves)
{
    if (curves.empty()) {
        throw InvalidInput("mean_curve: no curves");
    }
    const auto& first = curves.front().points;
    std::vector<MeanPoint> out(first.size());
    for (std::size_t k = 0; k < first.size(); ++k) {
        out[k].pairs_written = first[k].pairs_written;
    }
    for (const auto& c : curves) {
        if (c.points.size() != first.size()) {
            throw InvalidInput("mean_curve: checkpoint grids differ");
        }
        for (std::size_t k = 0; k < first.size(); ++k) {
            if (c.points[k].pairs_written != first[k].pairs_written) {
                throw InvalidInput("mean_curve: checkpoint grids differ");
            }
            out[k].pairs_recalled += static_cast<double>(c.points[k].pairs_recalled);
            out[k].recall_fraction += c.points[k].recall_fraction;
            out[k].underfired_rate += c.points[k].underfired_rate;
        }
    }
    const auto n = static_cast<double>(curves.size());
    for (auto& p : out) {
        p.pairs_recalled /= n;
        p.recall_fraction /= n;
        p.underfired_rate /= n;
    }
    return out;
}

std::string format_mean_csv(std::span<const CapacityCurve> curves, const std::string& config)
{
    const auto points = mean_curve(curves);
    std::string seeds = "seeds: ";
    for (std::size_t k = 0; k < curves.size(); ++k) {
        if (k > 0) {
            seeds += ',';
        }
        seeds += std::to_string(curves[k].seed);
    }
    std::string out = header_block(seeds, config);
    for (const auto& p : points) {
        out += std::to_string(p.pairs_written) + "," + format_number(p.pairs_recalled) + ","
               + format_number(p.recall_fraction) + "," + format_number(p.underfired_rate) + "\n";
    }
    return out;
}

} // namespace nomsdm
