#include "nomsdm/codes.hpp"

#include <charconv>

namespace nomsdm {

NofMCode make_code(std::vector<Index> active, std::size_t m)
{
    std::sort(active.begin(), active.end());
    if (std::adjacent_find(active.begin(), active.end()) != active.end()) {
        throw InvalidCode("make_code: duplicate active index");
    }
    if (!active.empty() && active.back() >= m) {
        throw InvalidCode("make_code: index " + std::to_string(active.back())
                          + " out of range for m=" + std::to_string(m));
    }
    return NofMCode(m, std::move(active));
}

NofMCode random_code(std::size_t n, std::size_t m, Rng& rng)
{
    if (n > m) {
        throw InvalidCode("random_code: n=" + std::to_string(n) + " > m=" + std::to_string(m));
    }
    // Partial Fisher-Yates: the first n slots end up a uniform n-subset.
    std::vector<Index> pool(m);
    std::iota(pool.begin(), pool.end(), Index{0});
    for (std::size_t k = 0; k < n; ++k) {
        const auto pick = k + static_cast<std::size_t>(rng.uniform_index(m - k));
        std::swap(pool[k], pool[pick]);
    }
    pool.resize(n);
    return make_code(std::move(pool), m);
}

std::string to_string(const NofMCode& code)
{
    std::string out = std::to_string(code.m()) + ":";
    bool first = true;
    for (Index i : code.active()) {
        if (!first) {
            out += ',';
        }
        out += std::to_string(i);
        first = false;
    }
    return out;
}

namespace {

std::uint64_t parse_unsigned(std::string_view s, std::string_view what)
{
    std::uint64_t value = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc() || ptr != end) {
        throw FormatError("parse_code: bad " + std::string(what) + " '" + std::string(s) + "'");
    }
    return value;
}

} // namespace

NofMCode parse_code(std::string_view text)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw FormatError("parse_code: missing ':' in '" + std::string(text) + "'");
    }
    const auto m = parse_unsigned(text.substr(0, colon), "length");
    std::vector<Index> active;
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto token = rest.substr(0, comma);
        active.push_back(static_cast<Index>(parse_unsigned(token, "index")));
        if (comma == std::string_view::npos) {
            break;
        }
        rest = rest.substr(comma + 1);
        if (rest.empty()) {
            throw FormatError("parse_code: trailing ','");
        }
    }
    std::vector<Index> sorted = active;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != active) {
        throw FormatError("parse_code: indices must be ascending");
    }
    return make_code(std::move(active), static_cast<std::size_t>(m));
}

} // namespace nomsdm
