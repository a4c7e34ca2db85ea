#include "nomsdm/config_json.hpp"

#include <json.hpp>

namespace nomsdm {

using nlohmann::json;

namespace {

void put_spiking(json& j, const SpikingMemoryConfig& s)
{
    j["neuron"] = std::string(to_string(s.neuron));
    j["rule"] = std::string(to_string(s.rule));
    j["max-rate"] = s.resolved_max_rate();
    j["dt"] = s.dt;
    j["write-window"] = s.write_window;
    j["read-window"] = s.read_window;
    j["spike-current"] = s.spike_current;
    j["write-current"] = s.write_current;
    j["rate-factor"] = s.rate_factor;
    j["f-bcm"] = s.f_bcm;
    j["f-oja"] = s.f_oja;
    j["f1"] = s.f1;
    j["f2"] = s.f2;
    j["learning-rate"] = s.learning_rate;
    j["theta-tau"] = s.theta_tau;
    j["beta"] = s.oja_beta;
    j["tau-filter"] = s.tau_filter;
    j["bcm-target"] = s.bcm_target;
    j["oja-target"] = s.oja_target;
    j["weight-bound"] = std::string(to_string(s.weight_bound));
    j["bound-margin"] = s.bound_margin;
    j["drive"] = std::string(to_string(s.drive_mode));
    j["synapse-tau"] = s.synapse_tau;
    j["auto-scale"] = s.auto_scale_drive;
    j["izhikevich-d"] = s.izhikevich_d;
    j["tie"] = s.tie.is_seeded() ? "seeded" : "lowest";
    j["tie-seed"] = s.tie.seed();
}

json parse_object(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw FormatError("config: expected a JSON object");
    }
    return j;
}

/// Applies each key through its setter; anything left over is unknown.
class Reader {
public:
    explicit Reader(json j) : j_(std::move(j)) {}

    template <typename F>
    void number(const char* key, F&& set)
    {
        if (auto it = j_.find(key); it != j_.end()) {
            if (!it->is_number()) {
                throw InvalidInput(std::string("config: '") + key + "' must be a number");
            }
            set(it->get<double>());
            j_.erase(it);
        }
    }

    template <typename T>
    void count(const char* key, T& out)
    {
        if (auto it = j_.find(key); it != j_.end()) {
            if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
                throw InvalidInput(std::string("config: '") + key + "' must be a non-negative integer");
            }
            out = static_cast<T>(it->get<unsigned long long>());
            j_.erase(it);
        }
    }

    template <typename F>
    void text(const char* key, F&& set)
    {
        if (auto it = j_.find(key); it != j_.end()) {
            if (!it->is_string()) {
                throw InvalidInput(std::string("config: '") + key + "' must be a string");
            }
            set(it->get<std::string>());
            j_.erase(it);
        }
    }

    void flag(const char* key, bool& out)
    {
        if (auto it = j_.find(key); it != j_.end()) {
            if (!it->is_boolean()) {
                throw InvalidInput(std::string("config: '") + key + "' must be true or false");
            }
            out = it->get<bool>();
            j_.erase(it);
        }
    }

    void finish() const
    {
        if (!j_.empty()) {
            throw InvalidInput("config: unknown key '" + j_.begin().key() + "'");
        }
    }

private:
    json j_;
};

void read_spiking(Reader& r, SpikingMemoryConfig& s)
{
    r.text("neuron", [&](const std::string& v) { s.neuron = parse_neuron_kind(v); });
    r.text("rule", [&](const std::string& v) { s.rule = parse_rule_kind(v); });
    r.number("max-rate", [&](double v) { s.max_rate = v; });
    r.number("dt", [&](double v) { s.dt = v; });
    r.number("write-window", [&](double v) { s.write_window = v; });
    r.number("read-window", [&](double v) { s.read_window = v; });
    r.number("spike-current", [&](double v) { s.spike_current = v; });
    r.number("write-current", [&](double v) { s.write_current = v; });
    r.number("rate-factor", [&](double v) { s.rate_factor = v; });
    r.number("f-bcm", [&](double v) { s.f_bcm = v; });
    r.number("f-oja", [&](double v) { s.f_oja = v; });
    r.number("f1", [&](double v) { s.f1 = v; });
    r.number("f2", [&](double v) { s.f2 = v; });
    r.number("learning-rate", [&](double v) { s.learning_rate = v; });
    r.number("theta-tau", [&](double v) { s.theta_tau = v; });
    r.number("beta", [&](double v) { s.oja_beta = v; });
    r.number("tau-filter", [&](double v) { s.tau_filter = v; });
    r.number("bcm-target", [&](double v) { s.bcm_target = v; });
    r.number("oja-target", [&](double v) { s.oja_target = v; });
    r.text("weight-bound", [&](const std::string& v) { s.weight_bound = parse_weight_bound(v); });
    r.number("bound-margin", [&](double v) { s.bound_margin = v; });
    r.text("drive", [&](const std::string& v) { s.drive_mode = parse_drive_mode(v); });
    r.number("synapse-tau", [&](double v) { s.synapse_tau = v; });
    r.flag("auto-scale", s.auto_scale_drive);
    r.number("izhikevich-d", [&](double v) { s.izhikevich_d = v; });
    std::string tie = s.tie.is_seeded() ? "seeded" : "lowest";
    std::uint64_t tie_seed = s.tie.seed();
    r.text("tie", [&](const std::string& v) { tie = v; });
    r.count("tie-seed", tie_seed);
    if (tie == "lowest") {
        s.tie = TieRule::lowest_index();
    } else if (tie == "seeded") {
        s.tie = TieRule::seeded_random(tie_seed);
    } else {
        throw InvalidInput("config: tie must be 'lowest' or 'seeded'");
    }
}

void put_arch(json& j, const SdmConfig& a)
{
    j["A"] = a.address_size;
    j["D"] = a.data_size;
    j["W"] = a.decoder_size;
    j["n"] = a.address_weight;
    j["w"] = a.decoder_winners;
    j["d"] = a.data_weight;
    j["a"] = a.decoder_row_weight;
}

void read_arch(Reader& r, SdmConfig& a)
{
    r.count("A", a.address_size);
    r.count("D", a.data_size);
    r.count("W", a.decoder_size);
    r.count("n", a.address_weight);
    r.count("w", a.decoder_winners);
    r.count("d", a.data_weight);
    r.count("a", a.decoder_row_weight);
}

} // namespace

std::string sweep_config_json(const SweepConfig& c)
{
    json j = json::object();
    j["memory"] = std::string(to_string(c.memory));
    j["mode"] = std::string(to_string(c.mode));
    put_arch(j, c.arch);
    j["pairs-max"] = c.pairs_max;
    j["step"] = c.checkpoint_step;
    j["seeds"] = c.seeds;
    j["seed-base"] = c.seed_base;
    put_spiking(j, c.spiking);
    return j.dump();
}

SweepConfig parse_sweep_config(std::string_view text, const SweepConfig& base)
{
    SweepConfig c = base;
    Reader r(parse_object(text));
    r.text("memory", [&](const std::string& v) { c.memory = parse_memory_kind(v); });
    r.text("mode", [&](const std::string& v) { c.mode = parse_memory_mode(v); });
    read_arch(r, c.arch);
    r.count("pairs-max", c.pairs_max);
    r.count("step", c.checkpoint_step);
    r.count("seeds", c.seeds);
    r.count("seed-base", c.seed_base);
    read_spiking(r, c.spiking);
    r.finish();
    return c;
}

std::string mnist_config_json(const MnistConfig& c)
{
    json j = json::object();
    j["mode"] = std::string(to_string(c.mode));
    put_arch(j, c.arch);
    j["count"] = c.count;
    j["step"] = c.checkpoint_step;
    j["encoder"] = std::string(to_string(c.encoder));
    j["encoder-row-weight"] = c.encoder_row_weight;
    j["encoder-seed"] = c.encoder_seed;
    j["seed"] = c.seed;
    j["shuffle-seed"] = c.shuffle_seed;
    j["data-dir"] = c.data_dir;
    put_spiking(j, c.spiking);
    return j.dump();
}

MnistConfig parse_mnist_config(std::string_view text, const MnistConfig& base)
{
    MnistConfig c = base;
    Reader r(parse_object(text));
    r.text("mode", [&](const std::string& v) { c.mode = parse_memory_mode(v); });
    read_arch(r, c.arch);
    r.count("count", c.count);
    r.count("step", c.checkpoint_step);
    r.text("encoder", [&](const std::string& v) { c.encoder = parse_encoder_kind(v); });
    r.count("encoder-row-weight", c.encoder_row_weight);
    r.count("encoder-seed", c.encoder_seed);
    r.count("seed", c.seed);
    r.count("shuffle-seed", c.shuffle_seed);
    r.text("data-dir", [&](const std::string& v) { c.data_dir = v; });
    read_spiking(r, c.spiking);
    r.finish();
    return c;
}

std::string config_text_from_file(std::string_view contents)
{
    std::size_t pos = 0;
    while (pos < contents.size() && (contents[pos] == ' ' || contents[pos] == '\n' || contents[pos] == '\t'
                                     || contents[pos] == '\r')) {
        ++pos;
    }
    if (pos < contents.size() && contents[pos] == '{') {
        return std::string(contents);
    }
    constexpr std::string_view marker = "# config: ";
    const auto at = contents.find(marker);
    if (at == std::string_view::npos) {
        throw FormatError("config file is neither JSON nor a CSV with a '# config:' line");
    }
    const auto start = at + marker.size();
    const auto end = contents.find('\n', start);
    auto line = contents.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return std::string(line);
}

} // namespace nomsdm
