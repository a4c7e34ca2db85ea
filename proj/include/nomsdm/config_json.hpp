#pragma once

#include <string>
#include <string_view>

#include "nomsdm/capacity.hpp"
#include "nomsdm/mnist.hpp"

namespace nomsdm {

// Flat JSON objects keyed by the command-line flag names (without dashes),
// e.g. {"memory":"cmm","A":256,"pairs-max":800,...}. Parsing starts from
// `base` and overrides only the keys present; unknown keys, wrong types and
// bad enum names raise InvalidInput, malformed JSON raises FormatError.

std::string sweep_config_json(const SweepConfig& config);
SweepConfig parse_sweep_config(std::string_view json, const SweepConfig& base = {});

std::string mnist_config_json(const MnistConfig& config);
MnistConfig parse_mnist_config(std::string_view json, const MnistConfig& base = {});

/// The JSON text of a config file: either a JSON object or an output CSV
/// whose `# config:` line is extracted.
std::string config_text_from_file(std::string_view contents);

} // namespace nomsdm
