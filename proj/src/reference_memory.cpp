#include "nomsdm/reference_memory.hpp"

#include <string>

namespace nomsdm {

void BinaryWeightMatrix::check_input(const NofMCode& x) const
{
    if (x.m() != cols()) {
        throw ShapeError("pattern of length " + std::to_string(x.m()) + " presented to matrix with "
                         + std::to_string(cols()) + " inputs");
    }
}

Cmm::Cmm(std::size_t input_size, std::size_t output_size, std::size_t d_out, TieRule tie)
    : weights_(output_size, input_size), d_out_(d_out), tie_(tie)
{
    if (d_out > output_size) {
        throw InvalidCode("CMM output weight d exceeds output size");
    }
}

void Cmm::write(const NofMCode& x, const NofMCode& y)
{
    if (x.m() != input_size() || y.m() != output_size()) {
        throw ShapeError("cmm_write: expected " + std::to_string(input_size()) + " -> "
                         + std::to_string(output_size()) + ", got " + std::to_string(x.m())
                         + " -> " + std::to_string(y.m()));
    }
    for (Index i : y.active()) {
        for (Index j : x.active()) {
            weights_.set(i, j);
        }
    }
    ++pairs_stored_;
}

NofMCode Cmm::read(const NofMCode& x, const TieRule& tie) const
{
    return top_n_decode(weights_.active_sums<int>(x), d_out_, tie);
}

BinaryWeightMatrix build_address_decoder(std::size_t address_size, std::size_t decoder_size,
                                         std::size_t row_weight, Rng& rng)
{
    if (row_weight > address_size) {
        throw InvalidCode("address decoder row weight a exceeds address size A");
    }
    if (decoder_size < 1) {
        throw InvalidInput("address decoder needs at least one row");
    }
    BinaryWeightMatrix decoder(decoder_size, address_size);
    for (std::size_t r = 0; r < decoder_size; ++r) {
        const auto row = random_code(row_weight, address_size, rng);
        for (Index j : row.active()) {
            decoder.set(r, j);
        }
    }
    return decoder;
}

Sdm::Sdm(BinaryWeightMatrix decoder, std::size_t winners, std::size_t data_size,
         std::size_t data_weight, TieRule tie)
    : decoder_(std::move(decoder)),
      data_(decoder_.rows(), data_size, data_weight, tie),
      winners_(winners),
      tie_(tie)
{
    if (winners > decoder_.rows()) {
        throw InvalidCode("SDM winner count w exceeds decoder size W");
    }
}

NofMCode Sdm::decode_address(const NofMCode& address) const
{
    return top_n_decode(decoder_.active_sums<int>(address), winners_, tie_);
}

void Sdm::write(const NofMCode& address, const NofMCode& data)
{
    if (data.m() != data_.output_size()) {
        throw ShapeError("sdm_write: data length mismatch");
    }
    data_.write(decode_address(address), data);
}

NofMCode Sdm::read(const NofMCode& address) const
{
    return data_.read(decode_address(address), tie_);
}

} // namespace nomsdm
