#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>

#include "nomsdm/codes.hpp"
#include "nomsdm/reference_memory.hpp"
#include "nomsdm/spiking_memory.hpp"

namespace nomsdm {

enum class MemoryKind { cmm, sdm };
enum class MemoryMode { reference, spiking };

std::string_view to_string(MemoryKind kind);
MemoryKind parse_memory_kind(std::string_view name);
std::string_view to_string(MemoryMode mode);
MemoryMode parse_memory_mode(std::string_view name);

struct Recall {
    NofMCode code;
    bool underfired = false;
};

/// Common write/read surface of the four memory variants. Reads are const
/// and safe to call concurrently between writes.
class AssociativeMemory {
public:
    virtual ~AssociativeMemory() = default;

    virtual void write(const NofMCode& address, const NofMCode& data) = 0;
    virtual Recall read(const NofMCode& address) const = 0;
    /// Called once before each read-back with every stored address.
    virtual void prepare_reads(std::span<const NofMCode> /*addresses*/) {}
};

/// Random stream of the address decoder for a given experiment seed.
inline constexpr std::uint64_t decoder_stream = 2;

/// Memory mapping `arch.address_size` to `arch.data_size` with d =
/// data_weight. The SDM decoder is drawn from `seed`.
std::unique_ptr<AssociativeMemory> make_memory(MemoryKind kind, MemoryMode mode, const SdmConfig& arch,
                                               const SpikingMemoryConfig& spiking, std::uint64_t seed);

} // namespace nomsdm
