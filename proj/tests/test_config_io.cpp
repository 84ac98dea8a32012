#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <kleinref/config.hpp>
#include <kleinref/errors.hpp>
#include <kleinref/io.hpp>
#include <kleinref/wavepacket.hpp>

#include "helpers.hpp"

using namespace kleinref;
using Catch::Matchers::WithinRel;

namespace {

namespace fs = std::filesystem;

// Fresh per-test scratch directory under the system temp root.
fs::path scratch_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("kleinref_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Small grid with a known density pattern for the writer tests.
FieldGrid ramp_grid(int nx, int nz) {
    FieldGrid g;
    g.geom = GridGeometry{-1.0, 1.0, -0.5, 0.5, nx, nz};
    g.values.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(nz), Complex{});
    g.density.resize(g.values.size());
    for (int ix = 0; ix < nx; ++ix)
        for (int iz = 0; iz < nz; ++iz)
            g.density[g.index(ix, iz)] = ix * 10.0 + iz;
    return g;
}

} // namespace

TEST_CASE("config text parses keys, comments and blank lines", "[config]") {
    const auto cfg = KeyValueConfig::from_text("# leading comment\n"
                                               "grid.nx = 64\n"
                                               "\n"
                                               "beam.theta_i=0.5 # trailing comment\n"
                                               "  label =  two words  \n");
    CHECK(cfg.get_int("grid.nx", 0) == 64);
    CHECK(cfg.get_double("beam.theta_i", 0.0) == 0.5);
    CHECK(cfg.get_string("label", "") == "two words");
    CHECK(cfg.get_double("missing", 7.25) == 7.25);
}

TEST_CASE("later assignments and --set overrides win", "[config]") {
    auto cfg = KeyValueConfig::from_text("a = 1\na = 2\n");
    CHECK(cfg.get_int("a", 0) == 2);
    cfg.set_assignment("a=3");
    CHECK(cfg.get_int("a", 0) == 3);
    cfg.set_assignment(" b = -1.5 ");
    CHECK(cfg.get_double("b", 0.0) == -1.5);
}

TEST_CASE("malformed config lines and overrides are rejected", "[config]") {
    CHECK_THROWS_AS(KeyValueConfig::from_text("not an assignment\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::from_text("= 3\n"), ConfigError);
    auto cfg = KeyValueConfig::from_text("");
    CHECK_THROWS_AS(cfg.set_assignment("no_equals"), ConfigError);
    CHECK_THROWS_AS(cfg.set_assignment("=5"), ConfigError);
}

TEST_CASE("numeric lookups parse strictly", "[config]") {
    const auto cfg = KeyValueConfig::from_text("x = 1.5e3\nn = 12\nbad = 3.5oops\nu = 18446744073709551615\n");
    CHECK(cfg.get_double("x", 0.0) == 1500.0);
    CHECK(cfg.get_int("n", 0) == 12);
    CHECK(cfg.get_u64("u", 0) == 18446744073709551615ull);
    CHECK_THROWS_AS(cfg.get_double("bad", 0.0), ConfigError);
    CHECK_THROWS_AS(cfg.get_int("x", 0), ConfigError);
}

TEST_CASE("comma lists parse element by element", "[config]") {
    const auto cfg = KeyValueConfig::from_text("angles = 0, 0.25 ,0.5\nbroken = 1,,2\n");
    const auto angles = cfg.get_double_list("angles", {});
    REQUIRE(angles.size() == 3);
    CHECK(angles[0] == 0.0);
    CHECK(angles[1] == 0.25);
    CHECK(angles[2] == 0.5);
    CHECK_THROWS_AS(cfg.get_double_list("broken", {}), ConfigError);
    CHECK(cfg.get_double_list("missing", {1.0}).size() == 1);
}

TEST_CASE("untouched keys are reported as unknown", "[config]") {
    const auto cfg = KeyValueConfig::from_text("grid.nx = 4\ngrid.typo = 9\n");
    (void)cfg.get_int("grid.nx", 0);
    CHECK_THROWS_WITH(cfg.reject_untouched("scenario lhm"),
                      Catch::Matchers::ContainsSubstring("grid.typo"));
    (void)cfg.get_int("grid.typo", 0);
    CHECK_NOTHROW(cfg.reject_untouched("scenario lhm"));
}

TEST_CASE("config files round-trip through the filesystem", "[config]") {
    const auto dir = scratch_dir("config_file");
    const auto path = dir / "run.cfg";
    {
        std::ofstream out(path);
        out << "beam.components = 9\n# done\n";
    }
    const auto cfg = KeyValueConfig::from_file(path);
    CHECK(cfg.get_int("beam.components", 0) == 9);
    CHECK_THROWS_AS(KeyValueConfig::from_file(dir / "absent.cfg"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("doubles survive format/parse round trips bitwise", "[io]") {
    std::mt19937_64 rng(0x5eed0601u);
    // Wide magnitude range, both signs, plus subnormal-ish corners.
    for (int i = 0; i < 100000; ++i) {
        const double mag = std::exp(testutil::uniform(rng, -700.0, 700.0));
        const double v = (rng() & 1u ? mag : -mag);
        const double back = parse_double(format_double(v));
        REQUIRE(testutil::bit_equal(back, v));
    }
    for (const double v : {0.0, -0.0, 1.0, -1.0, 0.1, 1e-308, 5e-324,
                           std::numeric_limits<double>::max(),
                           std::numeric_limits<double>::min()}) {
        CHECK(testutil::bit_equal(parse_double(format_double(v)), v));
    }
}

TEST_CASE("format_double emits the shortest familiar spellings", "[io]") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-2.412) == "-2.412");
    CHECK(format_double(1e100) == "1e+100");
    CHECK(parse_double("0.1") == 0.1);
    CHECK_THROWS_AS(parse_double("12,5"), ConfigError);
    CHECK_THROWS_AS(parse_double(""), ConfigError);
}

TEST_CASE("table CSV writes and reads back unchanged", "[io]") {
    const auto dir = scratch_dir("table_csv");
    const auto path = dir / "t.table.csv";
    std::mt19937_64 rng(0x5eed0602u);
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < 200; ++i)
        rows.push_back({format_double(testutil::uniform(rng, -5.0, 5.0)),
                        format_double(testutil::uniform(rng, 0.0, 1.0)), "propagating"});
    write_table_csv(path, {"value", "T", "regime"}, rows);

    const auto back = read_csv(path);
    REQUIRE(back.size() == rows.size() + 1);
    CHECK(back[0] == std::vector<std::string>{"value", "T", "regime"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(back[i + 1] == rows[i]);
        // numeric cells parse back to the exact double that produced them
        CHECK(testutil::bit_equal(parse_double(back[i + 1][0]), parse_double(rows[i][0])));
    }
    CHECK_THROWS_AS(write_table_csv(path, {"a", "b"}, {{"1"}}), IoError);
    fs::remove_all(dir);
}

TEST_CASE("density CSV lists grid points in storage order", "[io]") {
    const auto dir = scratch_dir("density_csv");
    const auto path = dir / "g.density.csv";
    const FieldGrid g = ramp_grid(3, 4);
    write_density_csv(path, g);

    const auto rows = read_csv(path);
    REQUIRE(rows.size() == 1u + 3u * 4u);
    CHECK(rows[0] == std::vector<std::string>{"x", "z", "value"});
    std::size_t r = 1;
    for (int ix = 0; ix < 3; ++ix)
        for (int iz = 0; iz < 4; ++iz, ++r) {
            CHECK(parse_double(rows[r][0]) == g.geom.x(ix));
            CHECK(parse_double(rows[r][1]) == g.geom.z(iz));
            CHECK(parse_double(rows[r][2]) == g.density[g.index(ix, iz)]);
        }
    fs::remove_all(dir);
}

TEST_CASE("summaries are plain key=value lines", "[io]") {
    const auto dir = scratch_dir("summary");
    const auto path = dir / "run.summary.txt";
    write_summary(path, {{"scenario", "lhm"}, {"T", "0.855"}});
    CHECK(slurp(path) == "scenario=lhm\nT=0.855\n");
    fs::remove_all(dir);
}

TEST_CASE("grayscale images map the density range linearly", "[io]") {
    const auto dir = scratch_dir("ppm");
    const auto ppm = dir / "g.density.ppm";
    const auto scale = dir / "g.scale.txt";
    const FieldGrid g = ramp_grid(2, 3); // densities 0,1,2 (ix=0) and 10,11,12 (ix=1)
    write_density_ppm(ppm, scale, g);

    const std::string img = slurp(ppm);
    const std::string header = "P6\n3 2\n255\n";
    REQUIRE(img.size() == header.size() + 2u * 3u * 3u);
    CHECK(img.substr(0, header.size()) == header);

    // Rows run from the top of the picture (largest x) down; v in [0,12].
    const auto px = [&](int row, int col) {
        return static_cast<unsigned char>(img[header.size() + (row * 3 + col) * 3]);
    };
    const auto level = [](double v) {
        return static_cast<unsigned char>(std::floor(255.0 * v / 12.0 + 0.5));
    };
    CHECK(px(0, 0) == level(10.0));
    CHECK(px(0, 2) == level(12.0));
    CHECK(px(1, 0) == level(0.0));
    CHECK(px(1, 2) == level(2.0));
    // Channels are equal (gray).
    CHECK(img[header.size()] == img[header.size() + 1]);
    CHECK(img[header.size()] == img[header.size() + 2]);

    CHECK(slurp(scale) == "vmin=0\nvmax=12\n");
    fs::remove_all(dir);
}

TEST_CASE("constant densities render as a black image", "[io]") {
    const auto dir = scratch_dir("ppm_flat");
    FieldGrid g = ramp_grid(2, 2);
    std::fill(g.density.begin(), g.density.end(), 3.5);
    write_density_ppm(dir / "f.ppm", dir / "f.scale.txt", g);
    const std::string img = slurp(dir / "f.ppm");
    const std::string header = "P6\n2 2\n255\n";
    for (std::size_t i = header.size(); i < img.size(); ++i) CHECK(img[i] == '\0');
    CHECK(slurp(dir / "f.scale.txt") == "vmin=3.5\nvmax=3.5\n");
    fs::remove_all(dir);
}

TEST_CASE("writers refuse unwritable paths", "[io]") {
    const fs::path bad = fs::temp_directory_path() / "kleinref_no_such_dir" / "x.csv";
    fs::remove_all(bad.parent_path());
    CHECK_THROWS_AS(write_table_csv(bad, {"a"}, {}), IoError);
    CHECK_THROWS_AS(write_summary(bad, {}), IoError);
    CHECK_THROWS_AS(read_csv(bad), IoError);
}
