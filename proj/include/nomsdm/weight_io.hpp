#pragma once

#include <filesystem>
#include <string>

#include "nomsdm/plasticity.hpp"
#include "nomsdm/reference_memory.hpp"

namespace nomsdm {

// Snapshot formats (little-endian):
//   'NOMW' u32 rows, u32 cols, then rows*cols bits row-major, packed
//          least-significant bit first, zero padded to a whole byte.
//   'NOMA' u32 rows, u32 cols, then rows*cols IEEE-754 doubles row-major.

std::string encode_weights(const BinaryWeightMatrix& weights);
std::string encode_weights(const AnalogWeightMatrix<double>& weights);
BinaryWeightMatrix decode_binary_weights(const std::string& bytes);
AnalogWeightMatrix<double> decode_analog_weights(const std::string& bytes);

void save_weights(const std::filesystem::path& path, const BinaryWeightMatrix& weights);
void save_weights(const std::filesystem::path& path, const AnalogWeightMatrix<double>& weights);
BinaryWeightMatrix load_binary_weights(const std::filesystem::path& path);
AnalogWeightMatrix<double> load_analog_weights(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

} // namespace nomsdm
