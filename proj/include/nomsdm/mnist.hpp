#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "nomsdm/capacity.hpp"
#include "nomsdm/codes.hpp"
#include "nomsdm/memory.hpp"

namespace nomsdm {

inline constexpr std::size_t mnist_pixels = 28 * 28;

struct MnistImage {
    std::array<std::uint8_t, mnist_pixels> pixels{};
};

struct MnistRecord {
    MnistImage image;
    int label = 0;
};

/// Parses IDX image (magic 0x00000803, 28x28) and label (0x00000801) buffers.
/// Throws FormatError on a bad magic, wrong image size, count mismatch,
/// truncated or empty input, or a label outside 0..9.
std::vector<MnistRecord> parse_idx(std::string_view images, std::string_view labels);
std::vector<MnistRecord> load_idx(const std::filesystem::path& images_path,
                                  const std::filesystem::path& labels_path);

struct IdxPaths {
    std::filesystem::path images;
    std::filesystem::path labels;
};

/// Image/label pair in `dir`: t10k first, then train, then the first other
/// `*images-idx3-ubyte` file (by name) with a matching labels file.
/// Throws FormatError when the directory or a matching pair is missing.
IdxPaths find_idx_files(const std::filesystem::path& dir);

enum class EncoderKind {
    dense,  ///< uniform [0, 1) weights
    sparse, ///< each row a random binary pattern over row_weight pixels
};

std::string_view to_string(EncoderKind kind);
EncoderKind parse_encoder_kind(std::string_view name);

/// Fixed random projection of an image to an n-of-outputs code.
class EncoderNet {
public:
    explicit EncoderNet(std::uint64_t seed, EncoderKind kind = EncoderKind::dense, std::size_t outputs = 256,
                        std::size_t n_out = 22, std::size_t sparse_row_weight = 64);

    /// Top n_out of weights * (pixels / 255), ties to the lowest index.
    NofMCode encode(const MnistImage& image) const;
    Eigen::VectorXd activations(const MnistImage& image) const;

    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>& weights() const noexcept
    {
        return weights_;
    }
    std::size_t n_out() const noexcept { return n_out_; }

private:
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> weights_;
    std::size_t n_out_;
};

/// 1-of-10 code. Throws InvalidInput outside 0..9.
NofMCode label_code(int label);

struct MnistConfig {
    MemoryMode mode = MemoryMode::spiking;
    SdmConfig arch{256, 10, 512, 22, 16, 1, 20};
    SpikingMemoryConfig spiking;
    std::size_t count = 3000;
    std::size_t checkpoint_step = 50;
    EncoderKind encoder = EncoderKind::dense;
    std::size_t encoder_row_weight = 64;
    std::uint64_t encoder_seed = 1;
    std::uint64_t seed = 1;          ///< address decoder seed
    std::uint64_t shuffle_seed = 0;  ///< 0 keeps file order
    std::string data_dir;

    void validate() const;
};

struct MnistResult {
    CapacityCurve curve;
    /// Stored images whose code equals an earlier stored image's code.
    std::size_t code_collisions = 0;
    /// Collisions where the earlier image has a different label.
    std::size_t conflicting_collisions = 0;
};

/// Dataset order after the optional seeded shuffle.
std::vector<std::size_t> mnist_order(std::size_t size, std::uint64_t shuffle_seed);

/// Stores the first `count` images (in mnist_order) as address = encoded
/// image, data = label code through the configured SDM, reading back every
/// stored pair at each checkpoint. Throws InvalidInput when count exceeds the
/// dataset.
MnistResult run_mnist_experiment(const MnistConfig& config, std::span<const MnistRecord> dataset,
                                 unsigned threads = 1,
                                 const std::function<void(const CurvePoint&)>& progress = {});

} // namespace nomsdm
