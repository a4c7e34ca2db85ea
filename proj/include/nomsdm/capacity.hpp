#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nomsdm/codes.hpp"
#include "nomsdm/memory.hpp"
#include "nomsdm/reference_memory.hpp"
#include "nomsdm/spiking_memory.hpp"

namespace nomsdm {

struct SweepConfig {
    MemoryKind memory = MemoryKind::cmm;
    MemoryMode mode = MemoryMode::reference;
    SdmConfig arch;
    SpikingMemoryConfig spiking;
    std::size_t pairs_max = 800;
    std::size_t checkpoint_step = 25;
    std::size_t seeds = 5;         ///< number of seeds
    std::uint64_t seed_base = 1;   ///< seeds are seed_base, seed_base + 1, ...

    /// Throws InvalidInput when step < 1, pairs_max < step or seeds < 1.
    void validate() const;
    std::vector<std::uint64_t> seed_list() const;
};

struct CurvePoint {
    std::size_t pairs_written = 0;
    std::size_t pairs_recalled = 0;
    double recall_fraction = 0.0;
    double underfired_rate = 0.0;

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct CapacityCurve {
    std::vector<CurvePoint> points;
    std::uint64_t seed = 0;
    std::string config; ///< resolved configuration as compact JSON

    friend bool operator==(const CapacityCurve&, const CapacityCurve&) = default;
};

struct CapacitySummary {
    /// End of the initial run of perfect checkpoints; 0 if the first one is imperfect.
    std::size_t perfect_until = 0;
    std::size_t peak_pairs_recalled = 0;
    std::size_t peak_location = 0; ///< earliest checkpoint reaching the peak
};

struct CurveDivergence {
    double max_abs = 0.0;
    double mean_abs = 0.0;
};

/// Multiples of step up to pairs_max, plus pairs_max itself when it is not one.
std::vector<std::size_t> checkpoint_grid(std::size_t pairs_max, std::size_t step);

/// Random stream of the address/data pairs for a given experiment seed.
inline constexpr std::uint64_t pair_stream = 1;

struct PairSet {
    std::vector<NofMCode> addresses;
    std::vector<NofMCode> data;
};

/// pairs_max random strict-code pairs, drawn address then data per pair.
PairSet generate_pairs(const SweepConfig& config, std::uint64_t seed);

/// Called after every checkpoint with the point just measured.
using ProgressFn = std::function<void(std::uint64_t seed, const CurvePoint&)>;

/// Writes the pairs in order and, at every checkpoint, reads back every pair
/// written so far. Reads may be spread over `threads` workers; the counts do
/// not depend on it. Throws NumericError naming the last checkpoint reached
/// if the memory raises one.
std::vector<CurvePoint> run_incremental(AssociativeMemory& memory, std::span<const NofMCode> addresses,
                                        std::span<const NofMCode> data,
                                        std::span<const std::size_t> checkpoints, unsigned threads = 1,
                                        const std::function<void(const CurvePoint&)>& progress = {});

/// The curve's config echo names this seed alone (seeds = 1, seed-base =
/// seed), so rerunning it reproduces the curve.
CapacityCurve run_capacity_sweep(const SweepConfig& config, std::uint64_t seed, unsigned threads = 1,
                                 const ProgressFn& progress = {});

/// One curve per configured seed, in seed order. Seeds run in parallel.
std::vector<CapacityCurve> run_capacity_sweeps(const SweepConfig& config, unsigned threads = 1,
                                               const ProgressFn& progress = {});

/// Throws InvalidInput on an empty curve.
CapacitySummary summarize(const CapacityCurve& curve);

/// Throws InvalidInput when the checkpoint grids differ.
CurveDivergence compare_curves(const CapacityCurve& a, const CapacityCurve& b);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

inline constexpr std::string_view csv_header =
    "pairs_written,pairs_recalled,recall_fraction,underfired_rate";

/// `# seed: <seed>` and `# config: <json>` lines, the header, then one row
/// per checkpoint.
std::string format_csv(const CapacityCurve& curve);
/// Throws FormatError on malformed input.
CapacityCurve parse_csv(std::string_view text);
/// Throws IoError when the file cannot be written.
void emit_csv(const CapacityCurve& curve, const std::filesystem::path& destination);
CapacityCurve read_csv(const std::filesystem::path& source);

/// Pointwise average over curves sharing a checkpoint grid. Recalled counts
/// become reals, so the mean has its own writer. Throws InvalidInput on an
/// empty list or mismatched grids.
struct MeanPoint {
    std::size_t pairs_written = 0;
    double pairs_recalled = 0.0;
    double recall_fraction = 0.0;
    double underfired_rate = 0.0;
};
std::vector<MeanPoint> mean_curve(std::span<const CapacityCurve> curves);
/// `# seeds: a,b,...` and `# config: <config>` lines, the header, then the mean rows.
std::string format_mean_csv(std::span<const CapacityCurve> curves, const std::string& config);

/// Standalone SVG of pairs_recalled against pairs_written, one polyline and
/// one legend entry per curve. Throws InvalidInput on an empty list or a
/// label count that differs from the curve count.
std::string render_svg(std::span<const CapacityCurve> curves, std::span<const std::string> labels);
void emit_plot(std::span<const CapacityCurve> curves, std::span<const std::string> labels,
               const std::filesystem::path& destination);

} // namespace nomsdm
