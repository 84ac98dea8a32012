#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <kleinref/kleinref.hpp>

#include "helpers.hpp"

using namespace kleinref;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("kleinref_scen_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> read_summary(const fs::path& path) {
    std::map<std::string, std::string> kv;
    std::ifstream in(path);
    REQUIRE(in);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        REQUIRE(eq != std::string::npos);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

double num(const std::map<std::string, std::string>& kv, const std::string& key) {
    const auto it = kv.find(key);
    REQUIRE(it != kv.end());
    return parse_double(it->second);
}

// Small but properly resolved beam grid: 6 wavelengths across 192 samples
// leaves ~13 points per transmitted wavelength at |n| ~ 2.4. The wider
// angular spread keeps the beam waist well inside the shrunken window.
KeyValueConfig small_beam_overrides(int threads) {
    auto cfg = KeyValueConfig::from_text("grid.nx = 192\n"
                                         "grid.nz = 192\n"
                                         "grid.span_wavelengths = 6\n"
                                         "beam.components = 17\n"
                                         "beam.angular_sigma = 0.15\n");
    cfg.set("grid.threads", std::to_string(threads));
    return cfg;
}

} // namespace

TEST_CASE("scenario names round-trip and reject strangers", "[scenarios]") {
    for (const auto s : {Scenario::lhm, Scenario::klein, Scenario::map, Scenario::coeffs,
                         Scenario::sweep})
        CHECK(parse_scenario(to_string(s)) == s);
    CHECK_THROWS_AS(parse_scenario("prism"), ConfigError);
}

TEST_CASE("empty configs yield the reference defaults", "[scenarios]") {
    const RunConfig rc = parse_run_config(Scenario::klein, KeyValueConfig::from_text(""));
    CHECK_THAT(joule_to_uev(rc.klein_energy), WithinRel(20.7, 1e-14));
    CHECK_THAT(joule_to_uev(rc.klein_potential), WithinRel(70.63, 1e-14));
    CHECK(rc.klein_mass == 0.0);
    CHECK(rc.beam_theta_i == pi / 6.0);
    CHECK(rc.beam_sigma == 0.06);
    CHECK(rc.beam_components == 129);
    CHECK(rc.grid_nx == 512);
    CHECK(rc.grid_nz == 512);
    CHECK(rc.grid_span == 20.0);
    CHECK(rc.out_prefix == fs::path("klein"));

    const RunConfig em = parse_run_config(Scenario::lhm, KeyValueConfig::from_text(""));
    CHECK(em.omega == design_omega);
    CHECK(em.medium.plasma_frequency == fitted_lhm_model().plasma_frequency);
}

TEST_CASE("config violations name the offending key", "[scenarios]") {
    const auto parse = [](Scenario s, const std::string& text) {
        return parse_run_config(s, KeyValueConfig::from_text(text));
    };
    CHECK_THROWS_WITH(parse(Scenario::klein, "klein.energy_uev = -1\n"),
                      ContainsSubstring("klein.energy_uev"));
    CHECK_THROWS_WITH(parse(Scenario::klein, "klein.rest_energy_uev = 30\n"),
                      ContainsSubstring("klein.energy_uev"));
    CHECK_THROWS_WITH(parse(Scenario::klein, "beam.components = 8\n"),
                      ContainsSubstring("beam.components"));
    CHECK_THROWS_WITH(parse(Scenario::klein, "grid.nx = 1\n"), ContainsSubstring("grid.nx"));
    CHECK_THROWS_WITH(parse(Scenario::klein, "grid.time = nan\n"), ContainsSubstring("grid.time"));
    CHECK_THROWS_WITH(parse(Scenario::lhm, "medium.fill_factor = 1.5\n"),
                      ContainsSubstring("medium.fill_factor"));
    CHECK_THROWS_WITH(parse(Scenario::lhm, "beam.angular_sigma = 0.5\n"),
                      ContainsSubstring("beam."));
    CHECK_THROWS_WITH(parse(Scenario::coeffs, "coeffs.picture = optics\n"),
                      ContainsSubstring("coeffs.picture"));
    CHECK_THROWS_WITH(parse(Scenario::coeffs, "coeffs.angles = 0, 1.6\n"),
                      ContainsSubstring("coeffs.angles"));
    CHECK_THROWS_WITH(parse(Scenario::sweep, "sweep.parameter = mass\n"),
                      ContainsSubstring("sweep.parameter"));
    CHECK_THROWS_WITH(parse(Scenario::sweep, "sweep.start = 2\nsweep.stop = 1\n"),
                      ContainsSubstring("sweep.stop"));
}

TEST_CASE("keys from another scenario are rejected as unknown", "[scenarios]") {
    CHECK_THROWS_WITH(
        parse_run_config(Scenario::lhm, KeyValueConfig::from_text("klein.energy_uev = 5\n")),
        ContainsSubstring("unknown config key 'klein.energy_uev'"));
    CHECK_THROWS_WITH(
        parse_run_config(Scenario::map, KeyValueConfig::from_text("beam.theta_i = 0.5\n")),
        ContainsSubstring("unknown config key 'beam.theta_i'"));
    CHECK_THROWS_WITH(
        parse_run_config(Scenario::klein, KeyValueConfig::from_text("grid.nnx = 4\n")),
        ContainsSubstring("grid.nnx"));
}

TEST_CASE("synthetic coefficients need the index and permeability together", "[scenarios]") {
    CHECK_THROWS_WITH(
        parse_run_config(Scenario::coeffs, KeyValueConfig::from_text("coeffs.n = -2.412\n")),
        ContainsSubstring("coeffs.mu"));
    CHECK_THROWS_WITH(parse_run_config(Scenario::sweep, KeyValueConfig::from_text(
                                           "sweep.parameter = omega\ncoeffs.n = -2\ncoeffs.mu = -1\n")),
                      ContainsSubstring("omega"));
}

TEST_CASE("coeffs tables match direct scattering calls", "[scenarios]") {
    const auto dir = scratch_dir("coeffs");

    auto cfg = KeyValueConfig::from_text("coeffs.picture = em\n"
                                         "coeffs.n = -2.412\n"
                                         "coeffs.mu = -1.222\n");
    cfg.set("coeffs.angles", "0," + format_double(pi / 6.0));
    const RunConfig rc = parse_run_config(Scenario::coeffs, cfg, dir / "em");
    const ScenarioResult res = run_scenario(rc);

    const auto rows = read_csv(dir / "em.table.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"theta_i", "T", "R", "tau_re", "tau_im", "rho_re",
                                              "rho_im", "regime"});
    // The table must agree with the library to the last digit.
    MediumSample synth;
    synth.omega = design_omega;
    synth.mu = -1.222;
    synth.epsilon = (-2.412) * (-2.412) / -1.222;
    synth.n = -2.412;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const double theta = parse_double(rows[r][0]);
        const auto ref = refract_em(make_em_incident(design_omega, theta), synth);
        CHECK(rows[r][1] == format_double(ref.T));
        CHECK(rows[r][2] == format_double(ref.R));
        CHECK(rows[r][7] == "propagating");
    }
    CHECK_THAT(parse_double(rows[2][1]), WithinRel(0.85503786677091186, 1e-13));
    CHECK_THAT(parse_double(rows[2][2]), WithinRel(0.14496213322908814, 1e-13));

    bool saw_rows = false;
    for (const auto& [k, v] : res.summary)
        if (k == "rows") {
            CHECK(v == "2");
            saw_rows = true;
        }
    CHECK(saw_rows);
    fs::remove_all(dir);
}

TEST_CASE("kg coefficient tables carry the paradox row", "[scenarios]") {
    const auto dir = scratch_dir("coeffs_kg");
    auto cfg = KeyValueConfig::from_text("coeffs.picture = kg\n");
    cfg.set("coeffs.angles", format_double(pi / 6.0));
    const RunConfig rc = parse_run_config(Scenario::coeffs, cfg, dir / "kg");
    (void)run_scenario(rc);

    const auto rows = read_csv(dir / "kg.table.csv");
    REQUIRE(rows.size() == 2);
    CHECK_THAT(parse_double(rows[1][1]), WithinRel(-3.6638786982782882, 1e-12));
    CHECK_THAT(parse_double(rows[1][2]), WithinRel(4.6638786982782882, 1e-12));
    CHECK(rows[1][7] == "strong-propagating");

    const auto kv = read_summary(dir / "kg.summary.txt");
    CHECK_THAT(num(kv, "energy_uev"), WithinRel(20.7, 1e-13));
    CHECK_THAT(num(kv, "rest_energy_uev"), WithinAbs(0.0, 0.0));
    fs::remove_all(dir);
}

TEST_CASE("the map table inverts the reference point", "[scenarios]") {
    const auto dir = scratch_dir("map");
    const RunConfig rc = parse_run_config(Scenario::map, KeyValueConfig::from_text("map.count = 201\n"),
                                          dir / "m");
    (void)run_scenario(rc);

    const auto rows = read_csv(dir / "m.table.csv");
    REQUIRE(rows.size() >= 3);
    CHECK(rows[0] == std::vector<std::string>{"omega", "n", "energy_uev", "potential_uev"});

    double best_energy = 0.0, best_gap = 1e300;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const double omega = parse_double(rows[r][0]);
        const double n = parse_double(rows[r][1]);
        const double energy = parse_double(rows[r][2]);
        CHECK(n < 0.0);
        CHECK(energy > 0.0);
        CHECK_THAT(parse_double(rows[r][3]), WithinRel(70.63, 1e-12));
        // every row satisfies E (1 - n) = V
        CHECK_THAT(energy * (1.0 - n), WithinRel(70.63, 1e-12));
        if (std::abs(omega - design_omega) < best_gap) {
            best_gap = std::abs(omega - design_omega);
            best_energy = energy;
        }
    }
    // near the design frequency the fixed step looks like E = 20.7 ueV
    CHECK_THAT(best_energy, WithinAbs(20.7, 0.25));
    fs::remove_all(dir);
}

TEST_CASE("maps outside the negative-index band fail loudly", "[scenarios]") {
    const auto dir = scratch_dir("map_stopband");
    auto cfg = KeyValueConfig::from_text("map.count = 11\n");
    cfg.set("map.omega_start", format_double(2.0 * design_omega));
    cfg.set("map.omega_stop", format_double(2.1 * design_omega));
    const RunConfig rc = parse_run_config(Scenario::map, cfg, dir / "m");
    CHECK_THROWS_AS(run_scenario(rc), StopbandError);
    fs::remove_all(dir);
}

TEST_CASE("grid sweeps cover the range in order and conserve current", "[scenarios]") {
    const auto dir = scratch_dir("sweep_grid");
    auto cfg = KeyValueConfig::from_text("sweep.picture = em\n"
                                         "sweep.parameter = theta_i\n"
                                         "sweep.count = 15\n"
                                         "coeffs.n = -2.412\n"
                                         "coeffs.mu = -1.222\n");
    const RunConfig rc = parse_run_config(Scenario::sweep, cfg, dir / "s");
    (void)run_scenario(rc);

    const auto rows = read_csv(dir / "s.table.csv");
    REQUIRE(rows.size() == 16);
    CHECK(rows[0] == std::vector<std::string>{"value", "T", "R", "regime"});
    CHECK(parse_double(rows[1][0]) == 0.0);
    CHECK_THAT(parse_double(rows[15][0]), WithinRel(1.4, 1e-15));
    double prev = -1.0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const double v = parse_double(rows[r][0]);
        CHECK(v > prev);
        prev = v;
        CHECK_THAT(parse_double(rows[r][1]) + parse_double(rows[r][2]), WithinAbs(1.0, 1e-12));
        CHECK(rows[r][3] == "propagating");
    }
    fs::remove_all(dir);
}

TEST_CASE("kg potential sweeps walk into the paradox zone", "[scenarios]") {
    const auto dir = scratch_dir("sweep_kg");
    auto cfg = KeyValueConfig::from_text("sweep.picture = kg\n"
                                         "sweep.parameter = potential_uev\n"
                                         "sweep.count = 61\n"
                                         "sweep.start = 0\n"
                                         "sweep.stop = 120\n");
    const RunConfig rc = parse_run_config(Scenario::sweep, cfg, dir / "s");
    (void)run_scenario(rc);

    const auto rows = read_csv(dir / "s.table.csv");
    REQUIRE(rows.size() == 62);
    bool saw_weak = false, saw_paradox = false;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const double T = parse_double(rows[r][1]);
        const double R = parse_double(rows[r][2]);
        if (rows[r][3] == "weak") saw_weak = true;
        if (rows[r][3] == "strong-propagating" && T < 0.0 && R > 1.0) saw_paradox = true;
        if (rows[r][3] != "strong-evanescent" && rows[r][3] != "intermediate")
            CHECK(testutil::close_rel(T + R, 1.0, 1e-12));
    }
    CHECK(saw_weak);
    CHECK(saw_paradox);
    fs::remove_all(dir);
}

TEST_CASE("random sweeps are reproducible from their seed", "[scenarios]") {
    const auto dir = scratch_dir("sweep_seed");
    const auto make = [&](const std::string& stem, std::uint64_t seed) {
        auto cfg = KeyValueConfig::from_text("sweep.picture = kg\n"
                                             "sweep.parameter = energy_uev\n"
                                             "sweep.mode = random\n"
                                             "sweep.count = 40\n");
        cfg.set("seed", std::to_string(seed));
        const RunConfig rc = parse_run_config(Scenario::sweep, cfg, dir / stem);
        (void)run_scenario(rc);
        return slurp(dir / (stem + ".table.csv"));
    };
    const std::string a = make("a", 7);
    const std::string b = make("b", 7);
    const std::string c = make("c", 8);
    CHECK(a == b);
    CHECK(a != c);

    // sampled values land sorted even in random mode
    const auto rows = read_csv(dir / "a.table.csv");
    double prev = -1e300;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const double v = parse_double(rows[r][0]);
        CHECK(v >= prev);
        prev = v;
    }
    fs::remove_all(dir);
}

TEST_CASE("the klein scenario writes the paradox summary and artifacts", "[scenarios]") {
    const auto dir = scratch_dir("klein_run");
    const RunConfig rc =
        parse_run_config(Scenario::klein, small_beam_overrides(2), dir / "nested" / "k");
    const ScenarioResult res = run_scenario(rc);

    for (const char* suffix : {".density.csv", ".density.ppm", ".scale.txt", ".summary.txt"})
        CHECK(fs::exists(dir / "nested" / (std::string("k") + suffix)));
    CHECK(res.files.size() == 4);

    const auto kv = read_summary(dir / "nested" / "k.summary.txt");
    CHECK(kv.at("scenario") == "klein");
    CHECK(kv.at("regime") == "strong");
    CHECK(kv.at("branch") == "strong-propagating");
    CHECK_THAT(num(kv, "energy_uev"), WithinRel(20.7, 1e-13));
    CHECK_THAT(num(kv, "potential_uev"), WithinRel(70.63, 1e-13));
    CHECK(num(kv, "rest_energy_uev") == 0.0);
    CHECK_THAT(num(kv, "T"), WithinRel(-3.6638786982782882, 1e-12));
    CHECK_THAT(num(kv, "R"), WithinRel(4.6638786982782882, 1e-12));
    CHECK_THAT(num(kv, "excess_potential_uev"), WithinRel(49.93, 1e-12));
    CHECK_THAT(num(kv, "evanescence_threshold_uev"), WithinRel(10.35, 1e-12));
    CHECK_THAT(num(kv, "theta_t_deg"), WithinAbs(-11.9636, 5e-4));
    // refraction lands on the incident side of the normal
    CHECK(num(kv, "theta_t_rad") < 0.0);
    CHECK_THAT(num(kv, "centroid_transmitted_deg"), WithinAbs(-11.96, 1.5));
    fs::remove_all(dir);
}

TEST_CASE("the lhm scenario reports the fitted medium and Snell angle", "[scenarios]") {
    const auto dir = scratch_dir("lhm_run");
    const RunConfig rc = parse_run_config(Scenario::lhm, small_beam_overrides(0), dir / "l");
    (void)run_scenario(rc);

    const auto kv = read_summary(dir / "l.summary.txt");
    CHECK(kv.at("scenario") == "lhm");
    CHECK(kv.at("branch") == "negative-index");
    CHECK_THAT(num(kv, "epsilon"), WithinRel(-4.76, 1e-13));
    CHECK_THAT(num(kv, "mu"), WithinRel(-1.222, 1e-13));
    CHECK_THAT(num(kv, "n"), WithinRel(-2.4117877186850421, 1e-13));
    CHECK_THAT(num(kv, "n_g"), WithinRel(15.610090137007004, 1e-12));
    CHECK_THAT(num(kv, "T"), WithinRel(0.85506780516183806, 1e-12));
    CHECK_THAT(num(kv, "R"), WithinRel(0.14493219483816194, 1e-12));
    CHECK_THAT(num(kv, "theta_t_deg"), WithinAbs(-11.9651, 5e-4));
    CHECK_THAT(num(kv, "centroid_transmitted_deg"), WithinAbs(-11.97, 1.5));
    fs::remove_all(dir);
}

TEST_CASE("scenario artifacts are byte-identical across thread counts", "[scenarios]") {
    const auto dir = scratch_dir("threads");
    const auto run_with = [&](const std::string& stem, int threads) {
        const RunConfig rc =
            parse_run_config(Scenario::klein, small_beam_overrides(threads), dir / stem);
        (void)run_scenario(rc);
    };
    run_with("t1", 1);
    run_with("t3", 3);
    run_with("t0", 0);
    for (const char* suffix : {".density.csv", ".density.ppm", ".scale.txt", ".summary.txt"}) {
        const std::string one = slurp(dir / ("t1" + std::string(suffix)));
        CHECK(one == slurp(dir / ("t3" + std::string(suffix))));
        CHECK(one == slurp(dir / ("t0" + std::string(suffix))));
    }
    fs::remove_all(dir);
}

TEST_CASE("reruns with the same config do not change a byte", "[scenarios]") {
    const auto dir = scratch_dir("rerun");
    auto cfg_text = std::string("sweep.picture = em\nsweep.parameter = omega\nsweep.count = 31\n");
    const auto run_once = [&](const std::string& stem) {
        const RunConfig rc =
            parse_run_config(Scenario::sweep, KeyValueConfig::from_text(cfg_text), dir / stem);
        (void)run_scenario(rc);
        return slurp(dir / (stem + ".table.csv")) + slurp(dir / (stem + ".summary.txt"));
    };
    CHECK(run_once("r1") == run_once("r2"));
    fs::remove_all(dir);
}

TEST_CASE("unwritable output prefixes raise an io error", "[scenarios]") {
    const auto dir = scratch_dir("io_fail");
    { std::ofstream(dir / "blocker") << "file, not a directory\n"; }
    auto cfg = KeyValueConfig::from_text("coeffs.picture = kg\n");
    const RunConfig rc = parse_run_config(Scenario::coeffs, cfg, dir / "blocker" / "out");
    CHECK_THROWS_AS(run_scenario(rc), IoError);
    fs::remove_all(dir);
}
