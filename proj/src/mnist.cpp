#include "nomsdm/mnist.hpp"

#include <algorithm>
#include <map>

#include "nomsdm/config_json.hpp"
#include "nomsdm/parallel.hpp"
#include "nomsdm/weight_io.hpp"

namespace nomsdm {

namespace {

constexpr std::uint32_t image_magic = 0x00000803;
constexpr std::uint32_t label_magic = 0x00000801;
constexpr std::uint64_t encoder_stream = 3;
constexpr std::uint64_t shuffle_stream = 4;

std::uint32_t read_be32(std::string_view buf, std::size_t offset, std::string_view what)
{
    if (buf.size() < offset + 4) {
        throw FormatError(std::string(what) + ": truncated header");
    }
    std::uint32_t v = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        v = (v << 8) | static_cast<unsigned char>(buf[offset + k]);
    }
    return v;
}

} // namespace

std::vector<MnistRecord> parse_idx(std::string_view images, std::string_view labels)
{
    if (images.empty() || labels.empty()) {
        throw FormatError("idx: empty file");
    }
    if (read_be32(images, 0, "idx images") != image_magic) {
        throw FormatError("idx images: bad magic (expected 0x00000803)");
    }
    if (read_be32(labels, 0, "idx labels") != label_magic) {
        throw FormatError("idx labels: bad magic (expected 0x00000801)");
    }
    const std::size_t n_images = read_be32(images, 4, "idx images");
    const std::size_t rows = read_be32(images, 8, "idx images");
    const std::size_t cols = read_be32(images, 12, "idx images");
    const std::size_t n_labels = read_be32(labels, 4, "idx labels");
    if (rows * cols != mnist_pixels) {
        throw FormatError("idx images: expected 28x28 images, got " + std::to_string(rows) + "x"
                          + std::to_string(cols));
    }
    if (n_images != n_labels) {
        throw FormatError("idx: " + std::to_string(n_images) + " images but " + std::to_string(n_labels)
                          + " labels");
    }
    if (images.size() != 16 + n_images * mnist_pixels) {
        throw FormatError("idx images: size does not match the header count");
    }
    if (labels.size() != 8 + n_labels) {
        throw FormatError("idx labels: size does not match the header count");
    }
    std::vector<MnistRecord> out(n_images);
    for (std::size_t k = 0; k < n_images; ++k) {
        const auto* src = images.data() + 16 + k * mnist_pixels;
        std::transform(src, src + mnist_pixels, out[k].image.pixels.begin(),
                       [](char c) { return static_cast<std::uint8_t>(c); });
        const int label = static_cast<unsigned char>(labels[8 + k]);
        if (label > 9) {
            throw FormatError("idx labels: label " + std::to_string(label) + " at record " + std::to_string(k));
        }
        out[k].label = label;
    }
    return out;
}

std::vector<MnistRecord> load_idx(const std::filesystem::path& images_path,
                                  const std::filesystem::path& labels_path)
{
    const auto images = read_file(images_path);
    const auto labels = read_file(labels_path);
    return parse_idx(images, labels);
}

IdxPaths find_idx_files(const std::filesystem::path& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw FormatError("mnist: '" + dir.string() + "' is not a directory");
    }
    const auto labels_for = [](const fs::path& images) {
        std::string name = images.filename().string();
        const auto at = name.find("images-idx3");
        name.replace(at, 11, "labels-idx1");
        return images.parent_path() / name;
    };
    const auto usable = [&](const fs::path& images) {
        return fs::is_regular_file(images, ec) && fs::is_regular_file(labels_for(images), ec);
    };
    for (const char* stem : {"t10k-images-idx3-ubyte", "train-images-idx3-ubyte"}) {
        if (usable(dir / stem)) {
            return {dir / stem, labels_for(dir / stem)};
        }
    }
    std::vector<fs::path> candidates;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        const auto name = entry.path().filename().string();
        if (name.find("images-idx3-ubyte") != std::string::npos && name.ends_with("ubyte")) {
            candidates.push_back(entry.path());
        }
    }
    std::sort(candidates.begin(), candidates.end());
    for (const auto& c : candidates) {
        if (usable(c)) {
            return {c, labels_for(c)};
        }
    }
    throw FormatError("mnist: no '*images-idx3-ubyte' / '*labels-idx1-ubyte' pair in '" + dir.string() + "'");
}

std::string_view to_string(EncoderKind kind) { return kind == EncoderKind::dense ? "dense" : "sparse"; }

EncoderKind parse_encoder_kind(std::string_view name)
{
    if (name == "dense") return EncoderKind::dense;
    if (name == "sparse") return EncoderKind::sparse;
    throw InvalidInput("unknown encoder '" + std::string(name) + "' (expected dense or sparse)");
}

EncoderNet::EncoderNet(std::uint64_t seed, EncoderKind kind, std::size_t outputs, std::size_t n_out,
                       std::size_t sparse_row_weight)
    : weights_(static_cast<Eigen::Index>(outputs), static_cast<Eigen::Index>(mnist_pixels)), n_out_(n_out)
{
    if (n_out > outputs) {
        throw InvalidCode("encoder: n_out exceeds the output count");
    }
    Rng rng(Rng::derive(seed, encoder_stream));
    if (kind == EncoderKind::dense) {
        for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
            for (Eigen::Index j = 0; j < weights_.cols(); ++j) {
                weights_(i, j) = rng.uniform01();
            }
        }
        return;
    }
    if (sparse_row_weight > mnist_pixels) {
        throw InvalidInput("encoder: sparse row weight exceeds the pixel count");
    }
    weights_.setZero();
    for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
        const auto row = random_code(sparse_row_weight, mnist_pixels, rng);
        for (Index j : row.active()) {
            weights_(i, static_cast<Eigen::Index>(j)) = 1.0;
        }
    }
}

Eigen::VectorXd EncoderNet::activations(const MnistImage& image) const
{
    Eigen::VectorXd x(static_cast<Eigen::Index>(mnist_pixels));
    for (std::size_t k = 0; k < mnist_pixels; ++k) {
        x(static_cast<Eigen::Index>(k)) = image.pixels[k] / 255.0;
    }
    return weights_ * x;
}

NofMCode EncoderNet::encode(const MnistImage& image) const
{
    return top_n_decode(activations(image), n_out_, TieRule::lowest_index());
}

NofMCode label_code(int label)
{
    if (label < 0 || label > 9) {
        throw InvalidInput("label_code: label " + std::to_string(label) + " outside 0..9");
    }
    return make_code({static_cast<Index>(label)}, 10);
}

void MnistConfig::validate() const
{
    if (count < 1) {
        throw InvalidInput("mnist: count must be >= 1");
    }
    if (checkpoint_step < 1) {
        throw InvalidInput("mnist: checkpoint step must be >= 1");
    }
    if (arch.data_size != 10 || arch.data_weight != 1) {
        throw InvalidInput("mnist: labels are 1-of-10 codes (D=10, d=1)");
    }
    if (arch.address_weight > arch.address_size || arch.decoder_winners > arch.decoder_size
        || arch.decoder_row_weight > arch.address_size) {
        throw InvalidInput("mnist: requires n <= A, w <= W and a <= A");
    }
    if (mode == MemoryMode::spiking) {
        spiking.validate();
    }
}

std::vector<std::size_t> mnist_order(std::size_t size, std::uint64_t shuffle_seed)
{
    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (shuffle_seed != 0) {
        Rng rng(Rng::derive(shuffle_seed, shuffle_stream));
        for (std::size_t k = size; k > 1; --k) {
            std::swap(order[k - 1], order[static_cast<std::size_t>(rng.uniform_index(k))]);
        }
    }
    return order;
}

MnistResult run_mnist_experiment(const MnistConfig& config, std::span<const MnistRecord> dataset,
                                 unsigned threads, const std::function<void(const CurvePoint&)>& progress)
{
    config.validate();
    if (config.count > dataset.size()) {
        throw InvalidInput("mnist: count " + std::to_string(config.count) + " exceeds the "
                           + std::to_string(dataset.size()) + " available images");
    }
    const auto order = mnist_order(dataset.size(), config.shuffle_seed);
    const EncoderNet encoder(config.encoder_seed, config.encoder, config.arch.address_size,
                             config.arch.address_weight, config.encoder_row_weight);

    std::vector<NofMCode> addresses(config.count);
    std::vector<NofMCode> data(config.count);
    parallel_for(config.count, threads, [&](std::size_t k) {
        addresses[k] = encoder.encode(dataset[order[k]].image);
    });
    MnistResult result;
    std::map<std::vector<Index>, int> seen;
    for (std::size_t k = 0; k < config.count; ++k) {
        const int label = dataset[order[k]].label;
        data[k] = label_code(label);
        const auto active = addresses[k].active();
        const auto [it, inserted] = seen.emplace(std::vector<Index>(active.begin(), active.end()), label);
        if (!inserted) {
            ++result.code_collisions;
            if (it->second != label) {
                ++result.conflicting_collisions;
            }
        }
    }

    auto memory = make_memory(MemoryKind::sdm, config.mode, config.arch, config.spiking, config.seed);
    const auto grid = checkpoint_grid(config.count, config.checkpoint_step);
    result.curve.seed = config.seed;
    result.curve.config = mnist_config_json(config);
    result.curve.points = run_incremental(*memory, addresses, data, grid, threads, progress);
    return result;
}

} // namespace nomsdm
