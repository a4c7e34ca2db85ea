#include <doctest.h>

#include "nomsdm/config_json.hpp"

using namespace nomsdm;

TEST_CASE("sweep config JSON round-trips")
{
    SweepConfig c;
    c.memory = MemoryKind::sdm;
    c.mode = MemoryMode::spiking;
    c.arch.decoder_size = 1024;
    c.pairs_max = 1200;
    c.seeds = 3;
    c.seed_base = 17;
    c.spiking.neuron = NeuronKind::izhikevich;
    c.spiking.rule = RuleKind::oja;
    c.spiking.drive_mode = DriveMode::spike_synapse;
    c.spiking.tie = TieRule::seeded_random(5);
    c.spiking.dt = 1e-4;
    const auto text = sweep_config_json(c);
    const auto back = parse_sweep_config(text);
    CHECK(sweep_config_json(back) == text);
    CHECK(back.arch == c.arch);
    CHECK(back.spiking.tie == c.spiking.tie);
    CHECK(back.spiking.dt == 1e-4);
    CHECK(text.find("\"pairs-max\":1200") != std::string::npos);
    CHECK(text.find("\"W\":1024") != std::string::npos);
}

TEST_CASE("sweep config parsing overrides only present keys")
{
    SweepConfig base;
    base.pairs_max = 333;
    const auto c = parse_sweep_config(R"({"memory":"sdm","w":8})", base);
    CHECK(c.memory == MemoryKind::sdm);
    CHECK(c.arch.decoder_winners == 8);
    CHECK(c.pairs_max == 333);
}

TEST_CASE("sweep config errors")
{
    CHECK_THROWS_AS(parse_sweep_config("{\"bogus\":1}"), InvalidInput);
    CHECK_THROWS_AS(parse_sweep_config("{\"A\":\"x\"}"), InvalidInput);
    CHECK_THROWS_AS(parse_sweep_config("{\"A\":-3}"), InvalidInput);
    CHECK_THROWS_AS(parse_sweep_config("{\"neuron\":\"hh\"}"), InvalidInput);
    CHECK_THROWS_AS(parse_sweep_config("{\"tie\":\"random\"}"), InvalidInput);
    CHECK_THROWS_AS(parse_sweep_config("{\"auto-scale\":1}"), InvalidInput);
    CHECK_THROWS_AS(parse_sweep_config("{oops"), FormatError);
    CHECK_THROWS_AS(parse_sweep_config("[1,2]"), FormatError);
}

TEST_CASE("mnist config JSON round-trips")
{
    MnistConfig c;
    c.count = 400;
    c.encoder = EncoderKind::sparse;
    c.shuffle_seed = 9;
    c.data_dir = "data/mnist5k";
    const auto text = mnist_config_json(c);
    const auto back = parse_mnist_config(text);
    CHECK(mnist_config_json(back) == text);
    CHECK(back.count == 400);
    CHECK(back.encoder == EncoderKind::sparse);
    CHECK(back.data_dir == "data/mnist5k");
    CHECK_THROWS_AS(parse_mnist_config("{\"pairs-max\":3}"), InvalidInput);
}

TEST_CASE("config text from JSON or CSV files")
{
    CHECK(config_text_from_file("  {\"A\":4}\n") == "  {\"A\":4}\n");
    CHECK(config_text_from_file("# seed: 3\n# config: {\"A\":4}\r\nheader\n") == "{\"A\":4}");
    CHECK_THROWS_AS(config_text_from_file("a,b\n1,2\n"), FormatError);
}
