#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Core>

#include "nomsdm/codes.hpp"
#include "nomsdm/rng.hpp"

namespace nomsdm {

/// Architectural constants shared by the binary and spiking memories.
struct SdmConfig {
    std::size_t address_size = 256;     ///< A
    std::size_t data_size = 256;        ///< D
    std::size_t decoder_size = 512;     ///< W
    std::size_t address_weight = 11;    ///< i, active bits per address
    std::size_t decoder_winners = 16;   ///< w
    std::size_t data_weight = 11;       ///< d
    std::size_t decoder_row_weight = 20; ///< a

    friend bool operator==(const SdmConfig&, const SdmConfig&) = default;
};

/// Unipolar binary weights, rows = outputs, cols = inputs.
class BinaryWeightMatrix {
public:
    using Storage = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    BinaryWeightMatrix() = default;
    BinaryWeightMatrix(std::size_t rows, std::size_t cols)
        : bits_(Storage::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)))
    {
    }

    std::size_t rows() const noexcept { return static_cast<std::size_t>(bits_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(bits_.cols()); }

    bool get(std::size_t i, std::size_t j) const
    {
        return bits_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0;
    }
    void set(std::size_t i, std::size_t j, bool value = true)
    {
        bits_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value ? 1 : 0;
    }

    std::size_t count_ones() const { return static_cast<std::size_t>(bits_.cast<std::size_t>().sum()); }
    std::size_t row_ones(std::size_t i) const
    {
        return static_cast<std::size_t>(bits_.row(static_cast<Eigen::Index>(i)).cast<std::size_t>().sum());
    }

    /// s_i = sum over active j of bit(i, j). Throws ShapeError if x.m() != cols().
    template <typename Scalar = int>
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> active_sums(const NofMCode& x) const
    {
        check_input(x);
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> s =
            Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(bits_.rows());
        for (Eigen::Index i = 0; i < bits_.rows(); ++i) {
            Scalar acc = 0;
            for (Index j : x.active()) {
                acc += static_cast<Scalar>(bits_(i, static_cast<Eigen::Index>(j)));
            }
            s(i) = acc;
        }
        return s;
    }

    const Storage& bits() const noexcept { return bits_; }

    friend bool operator==(const BinaryWeightMatrix& a, const BinaryWeightMatrix& b)
    {
        return a.bits_.rows() == b.bits_.rows() && a.bits_.cols() == b.bits_.cols()
               && a.bits_ == b.bits_;
    }

private:
    void check_input(const NofMCode& x) const;

    Storage bits_;
};

/// Binary correlation matrix memory: OR-accumulated outer products, read by
/// column sums followed by top-d selection.
class Cmm {
public:
    Cmm(std::size_t input_size, std::size_t output_size, std::size_t d_out, TieRule tie = {});

    /// weights[i][j] := 1 for every active i in y and j in x.
    void write(const NofMCode& x, const NofMCode& y);
    NofMCode read(const NofMCode& x) const { return read(x, tie_); }
    NofMCode read(const NofMCode& x, const TieRule& tie) const;
    Eigen::VectorXi read_sums(const NofMCode& x) const { return weights_.active_sums<int>(x); }

    const BinaryWeightMatrix& weights() const noexcept { return weights_; }
    std::size_t pairs_stored() const noexcept { return pairs_stored_; }
    std::size_t d_out() const noexcept { return d_out_; }
    std::size_t input_size() const noexcept { return weights_.cols(); }
    std::size_t output_size() const noexcept { return weights_.rows(); }

private:
    BinaryWeightMatrix weights_;
    std::size_t d_out_;
    std::size_t pairs_stored_ = 0;
    TieRule tie_;
};

/// W x A decoder, each row an independent strict a-of-A code.
BinaryWeightMatrix build_address_decoder(std::size_t address_size, std::size_t decoder_size,
                                         std::size_t row_weight, Rng& rng);

/// Binary sparse distributed memory: a fixed address decoder whose top-w
/// rows index a binary CMM data memory.
class Sdm {
public:
    Sdm(BinaryWeightMatrix decoder, std::size_t winners, std::size_t data_size,
        std::size_t data_weight, TieRule tie = {});

    /// The w-of-W internal code of an address.
    NofMCode decode_address(const NofMCode& address) const;
    void write(const NofMCode& address, const NofMCode& data);
    NofMCode read(const NofMCode& address) const;

    const BinaryWeightMatrix& decoder() const noexcept { return decoder_; }
    const Cmm& data_memory() const noexcept { return data_; }
    std::size_t winners() const noexcept { return winners_; }

private:
    BinaryWeightMatrix decoder_;
    Cmm data_;
    std::size_t winners_;
    TieRule tie_;
};

} // namespace nomsdm
