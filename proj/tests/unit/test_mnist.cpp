#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nomsdm/mnist.hpp"

using namespace nomsdm;

namespace {

std::string be32(std::uint32_t v)
{
    return {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
            static_cast<char>(v)};
}

std::string image_file(std::uint32_t count, std::uint32_t rows = 28, std::uint32_t cols = 28)
{
    std::string out = be32(0x803) + be32(count) + be32(rows) + be32(cols);
    for (std::uint32_t k = 0; k < count; ++k) {
        for (std::uint32_t p = 0; p < rows * cols; ++p) {
            out.push_back(static_cast<char>((k * 31 + p) % 256));
        }
    }
    return out;
}

std::string label_file(std::vector<std::uint8_t> labels)
{
    std::string out = be32(0x801) + be32(static_cast<std::uint32_t>(labels.size()));
    for (auto l : labels) {
        out.push_back(static_cast<char>(l));
    }
    return out;
}

std::filesystem::path subset_dir()
{
    return std::filesystem::path(NOMSDM_SOURCE_DIR) / "data" / "mnist5k";
}

} // namespace

TEST_CASE("IDX parsing")
{
    const auto records = parse_idx(image_file(2), label_file({3, 9}));
    REQUIRE(records.size() == 2);
    CHECK(records[0].label == 3);
    CHECK(records[1].label == 9);
    CHECK(records[1].image.pixels[0] == 31);
    CHECK(records[0].image.pixels[783] == 783 % 256);
}

TEST_CASE("IDX parsing errors")
{
    CHECK_THROWS_AS(parse_idx("", label_file({1})), FormatError);
    CHECK_THROWS_AS(parse_idx(image_file(1), ""), FormatError);
    CHECK_THROWS_AS(parse_idx(label_file({1}), label_file({1})), FormatError);
    CHECK_THROWS_AS(parse_idx(image_file(1, 32, 32), label_file({1})), FormatError);
    CHECK_THROWS_AS(parse_idx(image_file(2), label_file({1})), FormatError);
    CHECK_THROWS_AS(parse_idx(image_file(1), label_file({10})), FormatError);
    auto truncated = image_file(2);
    truncated.pop_back();
    CHECK_THROWS_AS(parse_idx(truncated, label_file({1, 2})), FormatError);
}

TEST_CASE("label codes are one-hot")
{
    for (int l = 0; l < 10; ++l) {
        const auto c = label_code(l);
        CHECK(c.m() == 10);
        CHECK(c.n() == 1);
        CHECK(c.contains(static_cast<Index>(l)));
    }
    CHECK_THROWS_AS(label_code(-1), InvalidInput);
    CHECK_THROWS_AS(label_code(10), InvalidInput);
}

TEST_CASE("encoder")
{
    const EncoderNet net(1);
    CHECK(net.weights().rows() == 256);
    CHECK(net.weights().cols() == 784);
    CHECK(net.weights().minCoeff() >= 0.0);
    CHECK(net.weights().maxCoeff() < 1.0);

    // A blank image ties everywhere and falls back to the lowest indices.
    const auto blank = net.encode(MnistImage{});
    CHECK(blank.n() == 22);
    CHECK(blank.active().front() == 0);
    CHECK(blank.active().back() == 21);

    MnistImage img;
    for (std::size_t p = 200; p < 400; ++p) {
        img.pixels[p] = 255;
    }
    const auto code = net.encode(img);
    CHECK(code == EncoderNet(1).encode(img));
    CHECK(code != EncoderNet(2).encode(img));

    const EncoderNet sparse(1, EncoderKind::sparse);
    for (Eigen::Index r = 0; r < sparse.weights().rows(); ++r) {
        CHECK(sparse.weights().row(r).sum() == 64.0);
    }
    CHECK(parse_encoder_kind(to_string(EncoderKind::sparse)) == EncoderKind::sparse);
    CHECK_THROWS_AS(parse_encoder_kind("conv"), InvalidInput);
}

TEST_CASE("shuffle order")
{
    const auto plain = mnist_order(10, 0);
    for (std::size_t k = 0; k < 10; ++k) {
        CHECK(plain[k] == k);
    }
    auto shuffled = mnist_order(10, 3);
    CHECK(shuffled != plain);
    CHECK(shuffled == mnist_order(10, 3));
    std::sort(shuffled.begin(), shuffled.end());
    CHECK(shuffled == plain);
}

TEST_CASE("finding IDX files")
{
    CHECK_THROWS_AS(find_idx_files("/nonexistent/mnist"), FormatError);

    const auto dir = std::filesystem::temp_directory_path() / "nomsdm_unit_idx";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    CHECK_THROWS_AS(find_idx_files(dir), FormatError);
    std::ofstream(dir / "train-images-idx3-ubyte") << "x";
    std::ofstream(dir / "train-labels-idx1-ubyte") << "x";
    CHECK(find_idx_files(dir).images.filename() == "train-images-idx3-ubyte");
    std::ofstream(dir / "t10k-images-idx3-ubyte") << "x";
    std::ofstream(dir / "t10k-labels-idx1-ubyte") << "x";
    CHECK(find_idx_files(dir).labels.filename() == "t10k-labels-idx1-ubyte");
    std::filesystem::remove_all(dir);
}

TEST_CASE("bundled subset")
{
    const auto paths = find_idx_files(subset_dir());
    const auto data = load_idx(paths.images, paths.labels);
    REQUIRE(data.size() == 5000);
    std::array<int, 10> per_class{};
    for (const auto& r : data) {
        ++per_class.at(static_cast<std::size_t>(r.label));
    }
    for (int c : per_class) {
        CHECK(c == 500);
    }
}

TEST_CASE("mnist experiment smoke")
{
    const auto paths = find_idx_files(subset_dir());
    const auto data = load_idx(paths.images, paths.labels);

    MnistConfig c;
    c.count = 1;
    c.checkpoint_step = 1;
    const auto one = run_mnist_experiment(c, data);
    REQUIRE(one.curve.points.size() == 1);
    CHECK(one.curve.points[0].pairs_recalled == 1);

    c.mode = MemoryMode::reference;
    c.count = 100;
    c.checkpoint_step = 50;
    const auto ref = run_mnist_experiment(c, data);
    CHECK(ref.curve.points.size() == 2);
    CHECK(ref.curve.points[0].recall_fraction == 1.0);

    c.count = 5001;
    CHECK_THROWS_AS(run_mnist_experiment(c, data), InvalidInput);
}
