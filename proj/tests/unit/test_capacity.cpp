#include <doctest.h>

#include <filesystem>
#include <regex>

#include "nomsdm/capacity.hpp"
#include "nomsdm/config_json.hpp"

using namespace nomsdm;

namespace {

CapacityCurve curve_of(std::vector<std::pair<std::size_t, std::size_t>> pts)
{
    CapacityCurve c;
    for (auto [w, r] : pts) {
        c.points.push_back({w, r, static_cast<double>(r) / static_cast<double>(w), 0.0});
    }
    return c;
}

std::size_t count_of(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

} // namespace

TEST_CASE("checkpoint grid")
{
    CHECK(checkpoint_grid(100, 25) == std::vector<std::size_t>{25, 50, 75, 100});
    CHECK(checkpoint_grid(110, 25) == std::vector<std::size_t>{25, 50, 75, 100, 110});
    CHECK(checkpoint_grid(1, 25) == std::vector<std::size_t>{1});
    CHECK(checkpoint_grid(800, 25).size() == 32);
    CHECK_THROWS_AS(checkpoint_grid(10, 0), InvalidInput);
}

TEST_CASE("sweep config validation")
{
    SweepConfig c;
    CHECK_NOTHROW(c.validate());
    c.checkpoint_step = 0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = {};
    c.pairs_max = 10;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = {};
    c.seeds = 0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = {};
    c.seed_base = 7;
    c.seeds = 3;
    CHECK(c.seed_list() == std::vector<std::uint64_t>{7, 8, 9});
}

TEST_CASE("summarize")
{
    const auto s = summarize(curve_of({{100, 100}, {200, 200}, {300, 290}}));
    CHECK(s.perfect_until == 200);
    CHECK(s.peak_pairs_recalled == 290);
    CHECK(s.peak_location == 300);

    const auto perfect = summarize(curve_of({{25, 25}, {50, 50}, {75, 75}}));
    CHECK(perfect.perfect_until == 75);
    CHECK(perfect.peak_location == 75);

    const auto plateau = summarize(curve_of({{300, 300}, {350, 330}, {400, 330}}));
    CHECK(plateau.peak_location == 350);

    CHECK(summarize(curve_of({{10, 9}, {20, 20}})).perfect_until == 0);
    CHECK_THROWS_AS(summarize(CapacityCurve{}), InvalidInput);
}

TEST_CASE("compare_curves")
{
    const auto a = curve_of({{10, 10}, {20, 18}, {30, 21}});
    const auto b = curve_of({{10, 10}, {20, 20}, {30, 24}});
    CHECK(compare_curves(a, a).max_abs == 0.0);
    const auto d = compare_curves(a, b);
    CHECK(d.max_abs == doctest::Approx(0.1));
    CHECK(d.mean_abs == doctest::Approx((0.0 + 0.1 + 0.1) / 3.0));
    CHECK_THROWS_AS(compare_curves(a, curve_of({{10, 10}})), InvalidInput);
    CHECK_THROWS_AS(compare_curves(a, curve_of({{10, 10}, {20, 20}, {31, 20}})), InvalidInput);
}

TEST_CASE("csv round trip and layout")
{
    CapacityCurve c = curve_of({{25, 25}, {50, 47}});
    c.points[1].underfired_rate = 0.02;
    c.seed = 42;
    c.config = R"({"memory":"cmm"})";
    const auto text = format_csv(c);
    CHECK(text.find("# seed: 42\n") == 0);
    CHECK(text.find("\npairs_written,pairs_recalled,recall_fraction,underfired_rate\n") != std::string::npos);
    CHECK(text.find("50,47,0.94,0.02\n") != std::string::npos);
    CHECK(parse_csv(text) == c);

    const auto single = curve_of({{1, 1}});
    const auto one = format_csv(single);
    CHECK(count_of(one, "\n") == 4);

    CHECK_THROWS_AS(parse_csv("# seed: 1\nwrong,header\n"), FormatError);
    CHECK_THROWS_AS(parse_csv("# seed: 1\n" + std::string(csv_header) + "\n1,2\n"), FormatError);
    CHECK_THROWS_AS(parse_csv(std::string(csv_header) + "\n"), FormatError);

    const auto path = std::filesystem::temp_directory_path() / "nomsdm_unit_curve.csv";
    emit_csv(c, path);
    CHECK(read_csv(path) == c);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(emit_csv(c, "/nonexistent-dir/x.csv"), IoError);
}

TEST_CASE("format_number round-trips doubles")
{
    for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, 123456.789, 1e-300}) {
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(1.0) == "1");
}

TEST_CASE("mean curve")
{
    auto a = curve_of({{10, 10}, {20, 18}});
    auto b = curve_of({{10, 10}, {20, 15}});
    a.seed = 1;
    b.seed = 2;
    const std::vector<CapacityCurve> both{a, b};
    const auto m = mean_curve(both);
    CHECK(m[1].pairs_recalled == doctest::Approx(16.5));
    const auto text = format_mean_csv(both, "{}");
    CHECK(text.find("# seeds: 1,2\n") == 0);
    CHECK(text.find("\n20,16.5,") != std::string::npos);
    CHECK_THROWS_AS(mean_curve(std::vector<CapacityCurve>{}), InvalidInput);
}

TEST_CASE("single pair sweep")
{
    for (auto kind : {MemoryKind::cmm, MemoryKind::sdm}) {
        for (auto mode : {MemoryMode::reference, MemoryMode::spiking}) {
            SweepConfig c;
            c.memory = kind;
            c.mode = mode;
            c.pairs_max = 1;
            c.checkpoint_step = 1;
            const auto curve = run_capacity_sweep(c, 3);
            REQUIRE(curve.points.size() == 1);
            CHECK(curve.points[0] == CurvePoint{1, 1, 1.0, 0.0});
        }
    }
}

TEST_CASE("sweeps are reproducible and independent of thread count")
{
    SweepConfig c;
    c.memory = MemoryKind::sdm;
    c.mode = MemoryMode::spiking;
    c.arch.decoder_size = 128;
    c.pairs_max = 120;
    c.checkpoint_step = 30;
    c.seeds = 2;
    const auto one = run_capacity_sweeps(c, 1);
    const auto four = run_capacity_sweeps(c, 4);
    REQUIRE(one.size() == 2);
    CHECK(format_csv(one[0]) == format_csv(four[0]));
    CHECK(format_csv(one[1]) == format_csv(four[1]));
    CHECK(one[0].points != one[1].points);

    // The embedded config names the seed and reruns to the same bytes.
    const auto rerun_cfg = parse_sweep_config(one[1].config);
    CHECK(rerun_cfg.seed_base == one[1].seed);
    CHECK(rerun_cfg.seeds == 1);
    CHECK(format_csv(run_capacity_sweep(rerun_cfg, rerun_cfg.seed_base, 2)) == format_csv(one[1]));
}

TEST_CASE("reference curves respect basic invariants")
{
    SweepConfig c;
    c.pairs_max = 500;
    const auto curve = run_capacity_sweep(c, 1);
    for (const auto& p : curve.points) {
        CHECK(p.pairs_recalled <= p.pairs_written);
        CHECK(p.recall_fraction >= 0.0);
        CHECK(p.recall_fraction <= 1.0);
        if (p.pairs_written <= 100) {
            CHECK(p.recall_fraction == 1.0);
        }
    }
}

TEST_CASE("svg plot")
{
    const std::vector<CapacityCurve> one{curve_of({{25, 25}, {50, 48}})};
    const std::vector<std::string> label{"W=256"};
    const auto svg = render_svg(one, label);
    CHECK(svg.find("<svg") == 0);
    CHECK(count_of(svg, "<polyline") == 1);
    CHECK(svg.find("pairs written") != std::string::npos);
    CHECK(svg.find("pairs recalled") != std::string::npos);

    const std::vector<CapacityCurve> three{one[0], one[0], one[0]};
    const std::vector<std::string> labels{"W=256", "W=512", "W=1024 <big>"};
    const auto svg3 = render_svg(three, labels);
    CHECK(count_of(svg3, "<polyline") == 3);
    CHECK(svg3.find("W=1024 &lt;big&gt;") != std::string::npos);

    CHECK_THROWS_AS(render_svg(std::vector<CapacityCurve>{}, std::vector<std::string>{}), InvalidInput);
    CHECK_THROWS_AS(render_svg(three, label), InvalidInput);
}
