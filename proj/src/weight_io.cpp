#include "nomsdm/weight_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "nomsdm/errors.hpp"

namespace nomsdm {

namespace {

void put_u32(std::string& out, std::uint32_t v)
{
    for (int k = 0; k < 4; ++k) {
        out.push_back(static_cast<char>((v >> (8 * k)) & 0xffU));
    }
}

std::uint32_t get_u32(const std::string& in, std::size_t at)
{
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + k])) << (8 * k);
    }
    return v;
}

std::string header(const char* magic, std::size_t rows, std::size_t cols)
{
    if (rows > 0xffffffffULL || cols > 0xffffffffULL) {
        throw InvalidInput("weight matrix too large for a snapshot");
    }
    std::string out(magic, 4);
    put_u32(out, static_cast<std::uint32_t>(rows));
    put_u32(out, static_cast<std::uint32_t>(cols));
    return out;
}

std::pair<std::size_t, std::size_t> check_header(const std::string& bytes, const char* magic)
{
    if (bytes.size() < 12 || bytes.compare(0, 4, magic) != 0) {
        throw FormatError(std::string("weight snapshot: missing '") + magic + "' header");
    }
    return {get_u32(bytes, 4), get_u32(bytes, 8)};
}

} // namespace

std::string encode_weights(const BinaryWeightMatrix& weights)
{
    std::string out = header("NOMW", weights.rows(), weights.cols());
    const std::size_t total = weights.rows() * weights.cols();
    std::string packed((total + 7) / 8, '\0');
    std::size_t k = 0;
    for (std::size_t i = 0; i < weights.rows(); ++i) {
        for (std::size_t j = 0; j < weights.cols(); ++j, ++k) {
            if (weights.get(i, j)) {
                packed[k / 8] = static_cast<char>(packed[k / 8] | (1 << (k % 8)));
            }
        }
    }
    return out + packed;
}

std::string encode_weights(const AnalogWeightMatrix<double>& weights)
{
    const auto rows = static_cast<std::size_t>(weights.rows());
    const auto cols = static_cast<std::size_t>(weights.cols());
    std::string out = header("NOMA", rows, cols);
    out.reserve(out.size() + rows * cols * 8);
    for (Eigen::Index i = 0; i < weights.rows(); ++i) {
        for (Eigen::Index j = 0; j < weights.cols(); ++j) {
            const auto bits = std::bit_cast<std::uint64_t>(weights(i, j));
            for (int b = 0; b < 8; ++b) {
                out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffU));
            }
        }
    }
    return out;
}

BinaryWeightMatrix decode_binary_weights(const std::string& bytes)
{
    const auto [rows, cols] = check_header(bytes, "NOMW");
    const std::size_t total = rows * cols;
    if (bytes.size() != 12 + (total + 7) / 8) {
        throw FormatError("NOMW snapshot: payload size does not match dimensions");
    }
    BinaryWeightMatrix weights(rows, cols);
    std::size_t k = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j, ++k) {
            const auto byte = static_cast<unsigned char>(bytes[12 + k / 8]);
            weights.set(i, j, ((byte >> (k % 8)) & 1U) != 0);
        }
    }
    return weights;
}

AnalogWeightMatrix<double> decode_analog_weights(const std::string& bytes)
{
    const auto [rows, cols] = check_header(bytes, "NOMA");
    if (bytes.size() != 12 + rows * cols * 8) {
        throw FormatError("NOMA snapshot: payload size does not match dimensions");
    }
    AnalogWeightMatrix<double> weights(static_cast<Eigen::Index>(rows),
                                       static_cast<Eigen::Index>(cols));
    std::size_t at = 12;
    for (Eigen::Index i = 0; i < weights.rows(); ++i) {
        for (Eigen::Index j = 0; j < weights.cols(); ++j) {
            std::uint64_t bits = 0;
            for (int b = 0; b < 8; ++b) {
                bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[at++])) << (8 * b);
            }
            weights(i, j) = std::bit_cast<double>(bits);
        }
    }
    return weights;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const std::string& bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void save_weights(const std::filesystem::path& path, const BinaryWeightMatrix& weights)
{
    write_file(path, encode_weights(weights));
}

void save_weights(const std::filesystem::path& path, const AnalogWeightMatrix<double>& weights)
{
    write_file(path, encode_weights(weights));
}

BinaryWeightMatrix load_binary_weights(const std::filesystem::path& path)
{
    return decode_binary_weights(read_file(path));
}

AnalogWeightMatrix<double> load_analog_weights(const std::filesystem::path& path)
{
    return decode_analog_weights(read_file(path));
}

} // namespace nomsdm
