#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "nomsdm/errors.hpp"
#include "nomsdm/rng.hpp"

namespace nomsdm {

using Index = std::uint32_t;

/**
 * Sparse binary pattern of length m stored as its sorted set of active
 * positions. A strict n-of-m code has exactly n active positions.
 *
 * Instances are immutable; build them with make_code() or random_code().
 */
class NofMCode {
public:
    NofMCode() = default;

    std::size_t m() const noexcept { return m_; }
    std::size_t n() const noexcept { return active_.size(); }
    std::span<const Index> active() const& noexcept { return active_; }
    /// Deleted so a range-for over a temporary's positions cannot dangle.
    std::span<const Index> active() const&& = delete;

    bool contains(Index i) const noexcept
    {
        return std::binary_search(active_.begin(), active_.end(), i);
    }

    /// Dense 0/1 column vector of length m.
    template <typename Scalar = double>
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> to_dense() const
    {
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v =
            Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(static_cast<Eigen::Index>(m_));
        for (Index i : active_) {
            v(static_cast<Eigen::Index>(i)) = Scalar(1);
        }
        return v;
    }

    friend bool operator==(const NofMCode&, const NofMCode&) = default;

private:
    friend NofMCode make_code(std::vector<Index> active, std::size_t m);

    NofMCode(std::size_t m, std::vector<Index> active) : m_(m), active_(std::move(active)) {}

    std::size_t m_ = 0;
    std::vector<Index> active_;
};

/// Validating constructor. Indices may arrive unsorted; duplicates and
/// indices >= m raise InvalidCode.
NofMCode make_code(std::vector<Index> active, std::size_t m);

/// Uniform strict n-of-m code drawn without replacement.
NofMCode random_code(std::size_t n, std::size_t m, Rng& rng);

/// Same length and same active set.
inline bool exact_match(const NofMCode& a, const NofMCode& b) noexcept { return a == b; }

/// `m:i1,i2,...` with ascending indices; an empty code is `m:`.
std::string to_string(const NofMCode& code);
NofMCode parse_code(std::string_view text);

/// How equal values at a selection cutoff are ordered.
///
/// LowestIndex prefers the smaller index. SeededRandom assigns every index
/// a fixed pseudo-random priority derived from the seed, so the order is
/// reproducible and independent of call history.
class TieRule {
public:
    TieRule() = default;

    static TieRule lowest_index() { return TieRule(); }
    static TieRule seeded_random(std::uint64_t seed) { return TieRule(true, seed); }

    bool is_seeded() const noexcept { return seeded_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// Smaller priority wins a tie. Distinct indices get distinct priorities.
    std::uint64_t priority(Index i) const noexcept
    {
        return seeded_ ? splitmix64(seed_ + i) : static_cast<std::uint64_t>(i);
    }

    friend bool operator==(const TieRule&, const TieRule&) = default;

private:
    TieRule(bool seeded, std::uint64_t seed) : seeded_(seeded), seed_(seed) {}

    bool seeded_ = false;
    std::uint64_t seed_ = 0;
};

namespace detail {

template <typename T>
bool is_nan(const T& v)
{
    if constexpr (std::is_floating_point_v<T>) {
        return std::isnan(v);
    } else {
        return false;
    }
}

} // namespace detail

/// Strict n-of-len(values) code of the n largest values. Every value strictly
/// above the cutoff is selected; equal values at the cutoff are ordered by
/// `tie`.
template <typename Derived>
NofMCode top_n_decode(const Eigen::DenseBase<Derived>& values, std::size_t n,
                      const TieRule& tie = {})
{
    const auto size = static_cast<std::size_t>(values.size());
    if (n > size) {
        throw InvalidCode("top_n_decode: n=" + std::to_string(n) + " exceeds length "
                          + std::to_string(size));
    }
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (detail::is_nan(values(i))) {
            throw NumericError("top_n_decode: NaN at position " + std::to_string(i));
        }
    }

    std::vector<Index> order(size);
    std::iota(order.begin(), order.end(), Index{0});
    const auto better = [&](Index a, Index b) {
        const auto va = values(static_cast<Eigen::Index>(a));
        const auto vb = values(static_cast<Eigen::Index>(b));
        if (va != vb) {
            return va > vb;
        }
        return tie.priority(a) < tie.priority(b);
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                      better);
    order.resize(n);
    return make_code(std::move(order), size);
}

inline NofMCode top_n_decode(std::span<const double> values, std::size_t n,
                             const TieRule& tie = {})
{
    return top_n_decode(Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                          static_cast<Eigen::Index>(values.size())),
                        n, tie);
}

} // namespace nomsdm
