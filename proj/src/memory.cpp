#include "nomsdm/memory.hpp"

#include <string>

namespace nomsdm {

std::string_view to_string(MemoryKind kind) { return kind == MemoryKind::cmm ? "cmm" : "sdm"; }

MemoryKind parse_memory_kind(std::string_view name)
{
    if (name == "cmm") return MemoryKind::cmm;
    if (name == "sdm") return MemoryKind::sdm;
    throw InvalidInput("unknown memory kind '" + std::string(name) + "' (expected cmm or sdm)");
}

std::string_view to_string(MemoryMode mode)
{
    return mode == MemoryMode::reference ? "reference" : "spiking";
}

MemoryMode parse_memory_mode(std::string_view name)
{
    if (name == "reference") return MemoryMode::reference;
    if (name == "spiking") return MemoryMode::spiking;
    throw InvalidInput("unknown memory mode '" + std::string(name) + "' (expected reference or spiking)");
}

namespace {

class ReferenceCmmMemory final : public AssociativeMemory {
public:
    ReferenceCmmMemory(const SdmConfig& arch, const TieRule& tie)
        : cmm_(arch.address_size, arch.data_size, arch.data_weight, tie)
    {
    }
    void write(const NofMCode& a, const NofMCode& d) override { cmm_.write(a, d); }
    Recall read(const NofMCode& a) const override { return {cmm_.read(a), false}; }

private:
    Cmm cmm_;
};

class ReferenceSdmMemory final : public AssociativeMemory {
public:
    ReferenceSdmMemory(BinaryWeightMatrix decoder, const SdmConfig& arch, const TieRule& tie)
        : sdm_(std::move(decoder), arch.decoder_winners, arch.data_size, arch.data_weight, tie)
    {
    }
    void write(const NofMCode& a, const NofMCode& d) override { sdm_.write(a, d); }
    Recall read(const NofMCode& a) const override { return {sdm_.read(a), false}; }

private:
    Sdm sdm_;
};

class SpikingCmmMemory final : public AssociativeMemory {
public:
    SpikingCmmMemory(const SdmConfig& arch, const SpikingMemoryConfig& cfg)
        : cmm_(SpikingCmm::standalone(arch.address_size, arch.data_size, cfg)), d_(arch.data_weight)
    {
    }
    void write(const NofMCode& a, const NofMCode& d) override { cmm_.write(a, d); }
    Recall read(const NofMCode& a) const override
    {
        auto r = cmm_.read(a, d_);
        return {std::move(r.code), r.underfired};
    }
    void prepare_reads(std::span<const NofMCode> addresses) override
    {
        if (cmm_.config().auto_scale_drive) {
            cmm_.scale_drive_to(addresses);
        }
    }

private:
    SpikingCmm cmm_;
    std::size_t d_;
};

class SpikingSdmMemory final : public AssociativeMemory {
public:
    SpikingSdmMemory(BinaryWeightMatrix decoder, const SdmConfig& arch, const SpikingMemoryConfig& cfg)
        : sdm_(std::move(decoder), arch.decoder_winners, arch.data_size, cfg), d_(arch.data_weight)
    {
    }
    void write(const NofMCode& a, const NofMCode& d) override { sdm_.write(a, d); }
    Recall read(const NofMCode& a) const override
    {
        auto r = sdm_.read(a, d_);
        return {std::move(r.code), r.underfired};
    }
    void prepare_reads(std::span<const NofMCode> addresses) override
    {
        if (!sdm_.data_memory().config().auto_scale_drive) {
            return;
        }
        std::vector<NofMCode> internal;
        internal.reserve(addresses.size());
        for (const auto& a : addresses) {
            internal.push_back(sdm_.decode_address(a).code);
        }
        sdm_.data_memory().scale_drive_to(internal);
    }

private:
    SpikingSdm sdm_;
    std::size_t d_;
};

} // namespace

std::unique_ptr<AssociativeMemory> make_memory(MemoryKind kind, MemoryMode mode, const SdmConfig& arch,
                                               const SpikingMemoryConfig& spiking, std::uint64_t seed)
{
    if (arch.data_weight > arch.data_size || arch.address_weight > arch.address_size) {
        throw InvalidCode("code weight exceeds pattern length");
    }
    if (kind == MemoryKind::cmm) {
        if (mode == MemoryMode::reference) {
            return std::make_unique<ReferenceCmmMemory>(arch, spiking.tie);
        }
        return std::make_unique<SpikingCmmMemory>(arch, spiking);
    }
    Rng rng(Rng::derive(seed, decoder_stream));
    auto decoder = build_address_decoder(arch.address_size, arch.decoder_size, arch.decoder_row_weight, rng);
    if (mode == MemoryMode::reference) {
        return std::make_unique<ReferenceSdmMemory>(std::move(decoder), arch, spiking.tie);
    }
    return std::make_unique<SpikingSdmMemory>(std::move(decoder), arch, spiking);
}

} // namespace nomsdm
