#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kleinref/config.hpp"
#include "kleinref/constants.hpp"
#include "kleinref/em_scatter.hpp"
#include "kleinref/errors.hpp"
#include "kleinref/io.hpp"
#include "kleinref/kg_scatter.hpp"
#include "kleinref/mapping.hpp"
#include "kleinref/media.hpp"
#include "kleinref/wavepacket.hpp"

// End-to-end runs: translate a key=value config into one of five scenarios,
// execute it, and write the artifacts. Everything a scenario emits is
// deterministic in its config alone -- no timestamps, no thread counts, no
// machine state -- so identical configs produce byte-identical files.

namespace kleinref {

enum class Scenario { lhm, klein, map, coeffs, sweep };

[[nodiscard]] constexpr const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::lhm: return "lhm";
        case Scenario::klein: return "klein";
        case Scenario::map: return "map";
        case Scenario::coeffs: return "coeffs";
        case Scenario::sweep: return "sweep";
    }
    return "?";
}

[[nodiscard]] inline Scenario parse_scenario(std::string_view name) {
    if (name == "lhm") return Scenario::lhm;
    if (name == "klein") return Scenario::klein;
    if (name == "map") return Scenario::map;
    if (name == "coeffs") return Scenario::coeffs;
    if (name == "sweep") return Scenario::sweep;
    throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

struct RunConfig {
    Scenario scenario = Scenario::lhm;

    MediumDispersion medium = fitted_lhm_model();
    double omega = design_omega; // rad/s, operating frequency

    double klein_energy = uev_to_joule(20.7);     // J
    double klein_potential = uev_to_joule(70.63); // J
    double klein_mass = 0.0;                      // kg

    double beam_theta_i = pi / 6.0; // rad
    double beam_sigma = 0.06;       // rad
    int beam_components = 129;

    int grid_nx = 512;
    int grid_nz = 512;
    double grid_span = 20.0; // wavelengths per axis
    double time = 0.0;       // s, snapshot instant
    int threads = 0;         // 0 = hardware concurrency

    std::string picture = "em"; // coeffs/sweep: "em" or "kg"
    std::optional<double> synth_n;
    std::optional<double> synth_mu;
    std::vector<double> angles; // rad, coeffs table

    std::string sweep_parameter = "theta_i";
    std::string sweep_mode = "grid"; // "grid" or "random"
    double sweep_start = 0.0;
    double sweep_stop = 0.0;
    int sweep_count = 0;
    std::uint64_t seed = 0;

    double map_omega_start = 0.0;
    double map_omega_stop = 0.0;
    int map_count = 0;

    std::filesystem::path out_prefix;
};

struct ScenarioResult {
    std::vector<std::pair<std::string, std::string>> summary;
    std::vector<std::filesystem::path> files;
};

namespace detail {

inline void require_key(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError("config key '" + key + "' " + what);
}

inline MediumDispersion parse_medium(const KeyValueConfig& cfg) {
    const MediumDispersion base = fitted_lhm_model();
    const double plasma = cfg.get_double("medium.plasma_frequency", base.plasma_frequency);
    const double resonance =
        cfg.get_double("medium.resonance_frequency", base.magnetic_resonance_frequency);
    const double fill = cfg.get_double("medium.fill_factor", base.magnetic_fill_factor);
    const double eloss = cfg.get_double("medium.electric_loss_rate", 0.0);
    const double mloss = cfg.get_double("medium.magnetic_loss_rate", 0.0);
    require_key(plasma > 0.0, "medium.plasma_frequency", "must be > 0");
    require_key(resonance > 0.0, "medium.resonance_frequency", "must be > 0");
    require_key(fill > 0.0 && fill < 1.0, "medium.fill_factor", "must lie in (0,1)");
    require_key(eloss >= 0.0, "medium.electric_loss_rate", "must be >= 0");
    require_key(mloss >= 0.0, "medium.magnetic_loss_rate", "must be >= 0");
    return {plasma, resonance, fill, eloss, mloss};
}

inline void parse_klein(const KeyValueConfig& cfg, RunConfig& rc) {
    const double energy_uev = cfg.get_double("klein.energy_uev", 20.7);
    const double potential_uev = cfg.get_double("klein.potential_uev", 70.63);
    const double rest_uev = cfg.get_double("klein.rest_energy_uev", 0.0);
    require_key(energy_uev > 0.0, "klein.energy_uev", "must be > 0");
    require_key(potential_uev >= 0.0, "klein.potential_uev", "must be >= 0");
    require_key(rest_uev >= 0.0, "klein.rest_energy_uev", "must be >= 0");
    require_key(energy_uev > rest_uev, "klein.energy_uev", "must exceed klein.rest_energy_uev");
    rc.klein_energy = uev_to_joule(energy_uev);
    rc.klein_potential = uev_to_joule(potential_uev);
    rc.klein_mass = uev_to_joule(rest_uev) / (speed_of_light * speed_of_light);
}

inline void parse_beam(const KeyValueConfig& cfg, RunConfig& rc) {
    rc.beam_theta_i = cfg.get_double("beam.theta_i", rc.beam_theta_i);
    rc.beam_sigma = cfg.get_double("beam.angular_sigma", rc.beam_sigma);
    rc.beam_components = cfg.get_int("beam.components", rc.beam_components);
    require_key(rc.beam_theta_i >= 0.0 && rc.beam_theta_i < pi / 2.0, "beam.theta_i",
                "must lie in [0, pi/2)");
    require_key(rc.beam_sigma > 0.0, "beam.angular_sigma", "must be > 0");
    require_key(rc.beam_components >= 1 && rc.beam_components % 2 == 1, "beam.components",
                "must be odd and >= 1");
    try {
        validate_beam({1.0, rc.beam_theta_i, rc.beam_sigma, rc.beam_components});
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("beam.*: ") + e.what());
    }
}

inline void parse_grid(const KeyValueConfig& cfg, RunConfig& rc) {
    rc.grid_nx = cfg.get_int("grid.nx", rc.grid_nx);
    rc.grid_nz = cfg.get_int("grid.nz", rc.grid_nz);
    rc.grid_span = cfg.get_double("grid.span_wavelengths", rc.grid_span);
    rc.time = cfg.get_double("grid.time", rc.time);
    rc.threads = cfg.get_int("grid.threads", rc.threads);
    require_key(rc.grid_nx >= 2, "grid.nx", "must be >= 2");
    require_key(rc.grid_nz >= 2, "grid.nz", "must be >= 2");
    require_key(rc.grid_span > 0.0, "grid.span_wavelengths", "must be > 0");
    require_key(std::isfinite(rc.time), "grid.time", "must be finite");
    require_key(rc.threads >= 0, "grid.threads", "must be >= 0");
}

[[nodiscard]] inline GridGeometry beam_grid(double wavelength, const RunConfig& rc) {
    const double half = 0.5 * rc.grid_span * wavelength;
    return {-half, half, -half, half, rc.grid_nx, rc.grid_nz};
}

[[nodiscard]] inline std::string format_angle_deg(double rad) {
    return format_double(rad * 180.0 / pi);
}

// Synthetic one-point sample for coefficient tables bypassing the model.
[[nodiscard]] inline MediumSample synthetic_sample(double omega, double n, double mu) {
    MediumSample s;
    s.omega = omega;
    s.mu = mu;
    s.epsilon = n * n / mu;
    s.n = n;
    return s;
}

} // namespace detail

[[nodiscard]] inline RunConfig parse_run_config(Scenario scenario, const KeyValueConfig& cfg,
                                                std::filesystem::path out_prefix = {}) {
    RunConfig rc;
    rc.scenario = scenario;
    rc.out_prefix = out_prefix.empty() ? std::filesystem::path(to_string(scenario)) : out_prefix;

    switch (scenario) {
        case Scenario::lhm: {
            rc.medium = detail::parse_medium(cfg);
            rc.omega = cfg.get_double("medium.omega", design_omega);
            detail::require_key(rc.omega > 0.0, "medium.omega", "must be > 0");
            detail::parse_beam(cfg, rc);
            detail::parse_grid(cfg, rc);
            break;
        }
        case Scenario::klein: {
            detail::parse_klein(cfg, rc);
            detail::parse_beam(cfg, rc);
            detail::parse_grid(cfg, rc);
            break;
        }
        case Scenario::map: {
            rc.medium = detail::parse_medium(cfg);
            const double potential_uev = cfg.get_double("klein.potential_uev", 70.63);
            detail::require_key(potential_uev > 0.0, "klein.potential_uev", "must be > 0");
            rc.klein_potential = uev_to_joule(potential_uev);
            const auto band = rc.medium.negative_index_band();
            const double pad = 0.01 * (band.second - band.first);
            rc.map_omega_start = cfg.get_double("map.omega_start", band.first + pad);
            rc.map_omega_stop = cfg.get_double("map.omega_stop", band.second - pad);
            rc.map_count = cfg.get_int("map.count", 101);
            detail::require_key(rc.map_omega_start > 0.0, "map.omega_start", "must be > 0");
            detail::require_key(rc.map_omega_stop > rc.map_omega_start, "map.omega_stop",
                                "must exceed map.omega_start");
            detail::require_key(rc.map_count >= 2, "map.count", "must be >= 2");
            break;
        }
        case Scenario::coeffs: {
            rc.picture = cfg.get_string("coeffs.picture", "em");
            detail::require_key(rc.picture == "em" || rc.picture == "kg", "coeffs.picture",
                                "must be 'em' or 'kg'");
            rc.angles = cfg.get_double_list(
                "coeffs.angles", {0.0, pi / 12.0, pi / 6.0, pi / 4.0, pi / 3.0});
            detail::require_key(!rc.angles.empty(), "coeffs.angles", "must list at least one angle");
            for (const double a : rc.angles)
                detail::require_key(a >= 0.0 && a < pi / 2.0, "coeffs.angles",
                                    "entries must lie in [0, pi/2)");
            if (rc.picture == "em") {
                const bool has_n = cfg.has("coeffs.n");
                const bool has_mu = cfg.has("coeffs.mu");
                if (has_n != has_mu)
                    throw ConfigError("coeffs.n and coeffs.mu must be given together");
                if (has_n) {
                    rc.synth_n = cfg.get_double("coeffs.n", 0.0);
                    rc.synth_mu = cfg.get_double("coeffs.mu", 0.0);
                    detail::require_key(*rc.synth_n != 0.0 && std::isfinite(*rc.synth_n),
                                        "coeffs.n", "must be finite and nonzero");
                    detail::require_key(*rc.synth_mu != 0.0 && std::isfinite(*rc.synth_mu),
                                        "coeffs.mu", "must be finite and nonzero");
                } else {
                    rc.medium = detail::parse_medium(cfg);
                }
                rc.omega = cfg.get_double("medium.omega", design_omega);
                detail::require_key(rc.omega > 0.0, "medium.omega", "must be > 0");
            } else {
                detail::parse_klein(cfg, rc);
            }
            break;
        }
        case Scenario::sweep: {
            rc.picture = cfg.get_string("sweep.picture", "em");
            detail::require_key(rc.picture == "em" || rc.picture == "kg", "sweep.picture",
                                "must be 'em' or 'kg'");
            rc.sweep_parameter = cfg.get_string("sweep.parameter", "theta_i");
            rc.sweep_mode = cfg.get_string("sweep.mode", "grid");
            detail::require_key(rc.sweep_mode == "grid" || rc.sweep_mode == "random", "sweep.mode",
                                "must be 'grid' or 'random'");
            rc.sweep_count = cfg.get_int("sweep.count", 101);
            detail::require_key(rc.sweep_count >= 2, "sweep.count", "must be >= 2");
            rc.seed = cfg.get_u64("seed", 20260819u);

            const bool em = rc.picture == "em";
            const bool kg = !em;
            const std::string& p = rc.sweep_parameter;
            const bool valid = (em && (p == "theta_i" || p == "omega" || p == "n" || p == "mu")) ||
                               (kg && (p == "theta_i" || p == "potential_uev" || p == "energy_uev"));
            detail::require_key(valid, "sweep.parameter",
                                em ? "must be theta_i, omega, n or mu for the em picture"
                                   : "must be theta_i, potential_uev or energy_uev for the kg picture");

            if (em) {
                if (cfg.has("coeffs.n") || cfg.has("coeffs.mu")) {
                    if (p == "omega")
                        throw ConfigError(
                            "sweep over omega samples the dispersion model; coeffs.n/coeffs.mu "
                            "do not apply");
                    rc.synth_n = cfg.get_double("coeffs.n", -2.412);
                    rc.synth_mu = cfg.get_double("coeffs.mu", -1.222);
                } else if (p == "n" || p == "mu") {
                    rc.synth_n = -2.412;
                    rc.synth_mu = -1.222;
                } else {
                    rc.medium = detail::parse_medium(cfg);
                }
                rc.omega = cfg.get_double("medium.omega", design_omega);
                detail::require_key(rc.omega > 0.0, "medium.omega", "must be > 0");
            } else {
                detail::parse_klein(cfg, rc);
            }
            rc.beam_theta_i = cfg.get_double("beam.theta_i", rc.beam_theta_i);
            detail::require_key(rc.beam_theta_i >= 0.0 && rc.beam_theta_i < pi / 2.0,
                                "beam.theta_i", "must lie in [0, pi/2)");

            // Range defaults depend on the swept parameter.
            double dstart = 0.0, dstop = 0.0;
            if (p == "theta_i") {
                dstart = 0.0;
                dstop = 1.4;
            } else if (p == "omega") {
                const auto band = rc.medium.negative_index_band();
                const double pad = 0.01 * (band.second - band.first);
                dstart = band.first + pad;
                dstop = band.second - pad;
            } else if (p == "n") {
                dstart = -5.0;
                dstop = -0.2;
            } else if (p == "mu") {
                dstart = -3.0;
                dstop = -0.2;
            } else if (p == "potential_uev") {
                dstart = 0.0;
                dstop = 120.0;
            } else { // energy_uev
                dstart = joule_to_uev(rc.klein_mass * speed_of_light * speed_of_light) + 1.0;
                dstop = dstart + 100.0;
            }
            rc.sweep_start = cfg.get_double("sweep.start", dstart);
            rc.sweep_stop = cfg.get_double("sweep.stop", dstop);
            detail::require_key(rc.sweep_stop > rc.sweep_start, "sweep.stop",
                                "must exceed sweep.start");
            if (p == "theta_i")
                detail::require_key(rc.sweep_start >= 0.0 && rc.sweep_stop < pi / 2.0,
                                    "sweep.start", "theta_i range must stay within [0, pi/2)");
            break;
        }
    }
    cfg.reject_untouched(std::string("scenario ") + to_string(scenario));
    return rc;
}

namespace detail {

inline void push_complex(std::vector<std::pair<std::string, std::string>>& kv,
                         const std::string& name, Complex v) {
    kv.emplace_back(name + "_re", format_double(v.real()));
    kv.emplace_back(name + "_im", format_double(v.imag()));
}

inline void ensure_parent_dir(const std::filesystem::path& prefix) {
    const std::filesystem::path dir = prefix.parent_path();
    if (dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

struct BeamArtifacts {
    FieldGrid grid;
    std::optional<double> centroid; // transmitted-half axis angle, rad
};

inline BeamArtifacts render_beam(const std::vector<ScatteredComponent>& comps, double wavelength,
                                 const RunConfig& rc) {
    BeamArtifacts art;
    art.grid = assemble_field(comps, beam_grid(wavelength, rc), rc.time, rc.threads);
    try {
        art.centroid = centroid_angle(art.grid, HalfPlane::transmitted);
    } catch (const UndefinedAxisError&) {
        art.centroid.reset();
    }
    return art;
}

inline void write_beam_outputs(const BeamArtifacts& art, ScenarioResult& res,
                               const RunConfig& rc) {
    const auto density_csv = rc.out_prefix.string() + ".density.csv";
    const auto density_ppm = rc.out_prefix.string() + ".density.ppm";
    const auto scale_txt = rc.out_prefix.string() + ".scale.txt";
    write_density_csv(density_csv, art.grid);
    write_density_ppm(density_ppm, scale_txt, art.grid);
    res.files.emplace_back(density_csv);
    res.files.emplace_back(density_ppm);
    res.files.emplace_back(scale_txt);
    if (art.centroid) {
        res.summary.emplace_back("centroid_transmitted_rad", format_double(*art.centroid));
        res.summary.emplace_back("centroid_transmitted_deg", format_angle_deg(*art.centroid));
    }
    res.summary.emplace_back("grid_nx", std::to_string(rc.grid_nx));
    res.summary.emplace_back("grid_nz", std::to_string(rc.grid_nz));
    res.summary.emplace_back("grid_span_wavelengths", format_double(rc.grid_span));
}

inline ScenarioResult run_lhm(const RunConfig& rc) {
    const MediumSample med = sample_medium(rc.medium, rc.omega);
    if (!med.propagating())
        throw StopbandError("lhm scenario: no propagating index at the operating frequency");

    const BeamSpec beam{rc.omega, rc.beam_theta_i, rc.beam_sigma, rc.beam_components};
    const auto spectrum = build_spectrum_em(beam);
    std::vector<ScatteredComponent> scattered;
    scattered.reserve(spectrum.size());
    for (const auto& c : spectrum) {
        const EmIncident inc{rc.omega, c.kx, c.kz, c.theta};
        scattered.push_back(make_scattered(c, refract_em(inc, med)));
    }

    const EmScatterResult center = refract_em(make_em_incident(rc.omega, rc.beam_theta_i), med);
    ScenarioResult res;
    res.summary.emplace_back("scenario", "lhm");
    res.summary.emplace_back("omega", format_double(rc.omega));
    res.summary.emplace_back("epsilon", format_double(med.epsilon.real()));
    res.summary.emplace_back("mu", format_double(med.mu.real()));
    res.summary.emplace_back("n", format_double(med.n));
    res.summary.emplace_back("n_g", format_double(med.n_g));
    res.summary.emplace_back("theta_i", format_double(rc.beam_theta_i));
    if (!center.evanescent()) {
        const Vec2 v = em_group_velocity(center, med);
        const double theta_t = std::atan2(v.x, v.z);
        res.summary.emplace_back("theta_t_rad", format_double(theta_t));
        res.summary.emplace_back("theta_t_deg", format_angle_deg(theta_t));
    }
    push_complex(res.summary, "qz", center.qz);
    push_complex(res.summary, "tau", center.tau);
    push_complex(res.summary, "rho", center.rho);
    res.summary.emplace_back("T", format_double(center.T));
    res.summary.emplace_back("R", format_double(center.R));
    res.summary.emplace_back("branch", center.sigma < 0 ? "negative-index" : "positive-index");
    res.summary.emplace_back("components", std::to_string(rc.beam_components));

    const double wavelength = 2.0 * pi * speed_of_light / rc.omega;
    const BeamArtifacts art = render_beam(scattered, wavelength, rc);
    write_beam_outputs(art, res, rc);
    return res;
}

inline ScenarioResult run_klein(const RunConfig& rc) {
    const KleinStep step{rc.klein_potential, rc.klein_mass, rc.klein_energy};
    const BeamSpec beam{rc.klein_energy, rc.beam_theta_i, rc.beam_sigma, rc.beam_components};
    const auto spectrum = build_spectrum_kg(beam, rc.klein_mass);
    std::vector<ScatteredComponent> scattered;
    scattered.reserve(spectrum.size());
    for (const auto& c : spectrum) {
        const KgIncident inc{c.kx, c.kz, c.theta};
        scattered.push_back(make_scattered(c, refract_kg(step, inc)));
    }

    const KgScatterResult center = refract_kg(step, make_kg_incident(step, rc.beam_theta_i));
    ScenarioResult res;
    res.summary.emplace_back("scenario", "klein");
    res.summary.emplace_back("energy_uev", format_double(joule_to_uev(rc.klein_energy)));
    res.summary.emplace_back("potential_uev", format_double(joule_to_uev(rc.klein_potential)));
    res.summary.emplace_back("rest_energy_uev",
                             format_double(joule_to_uev(step.mass_energy())));
    res.summary.emplace_back("theta_i", format_double(rc.beam_theta_i));
    res.summary.emplace_back("regime", to_string(classify_regime(step)));
    res.summary.emplace_back("branch", to_string(center.branch));
    res.summary.emplace_back("excess_potential_uev",
                             format_double(joule_to_uev(excess_potential(step))));
    const double kx_center = kg_wavenumber(step) * std::sin(rc.beam_theta_i);
    res.summary.emplace_back(
        "evanescence_threshold_uev",
        format_double(joule_to_uev(evanescence_threshold(rc.klein_mass, kx_center))));
    if (!center.evanescent()) {
        const Vec2 v = kg_group_velocity(step, center);
        const double theta_t = std::atan2(v.x, v.z);
        res.summary.emplace_back("theta_t_rad", format_double(theta_t));
        res.summary.emplace_back("theta_t_deg", format_angle_deg(theta_t));
    }
    push_complex(res.summary, "qz", center.qz);
    push_complex(res.summary, "tau", center.tau);
    push_complex(res.summary, "rho", center.rho);
    res.summary.emplace_back("T", format_double(center.T));
    res.summary.emplace_back("R", format_double(center.R));
    res.summary.emplace_back("components", std::to_string(rc.beam_components));

    const double wavelength = 2.0 * pi / kg_wavenumber(step);
    const BeamArtifacts art = render_beam(scattered, wavelength, rc);
    write_beam_outputs(art, res, rc);
    return res;
}

inline ScenarioResult run_map(const RunConfig& rc) {
    std::vector<std::vector<std::string>> rows;
    long skipped = 0;
    for (int i = 0; i < rc.map_count; ++i) {
        const double omega = rc.map_omega_start +
                             i * (rc.map_omega_stop - rc.map_omega_start) / (rc.map_count - 1);
        try {
            const double energy = counter_dispersive_energy(rc.medium, rc.klein_potential, omega);
            const MediumSample s = sample_medium(rc.medium, omega);
            rows.push_back({format_double(omega), format_double(s.n),
                            format_double(joule_to_uev(energy)),
                            format_double(joule_to_uev(rc.klein_potential))});
        } catch (const std::domain_error&) {
            ++skipped;
        }
    }
    if (rows.empty())
        throw StopbandError("map scenario: no negative-index samples in the frequency range");

    ScenarioResult res;
    res.summary.emplace_back("scenario", "map");
    res.summary.emplace_back("potential_uev", format_double(joule_to_uev(rc.klein_potential)));
    res.summary.emplace_back("omega_start", format_double(rc.map_omega_start));
    res.summary.emplace_back("omega_stop", format_double(rc.map_omega_stop));
    const auto band = rc.medium.negative_index_band();
    res.summary.emplace_back("band_lo", format_double(band.first));
    res.summary.emplace_back("band_hi", format_double(band.second));
    res.summary.emplace_back("rows", std::to_string(rows.size()));
    res.summary.emplace_back("skipped_stopband", std::to_string(skipped));

    const auto table = rc.out_prefix.string() + ".table.csv";
    write_table_csv(table, {"omega", "n", "energy_uev", "potential_uev"}, rows);
    res.files.emplace_back(table);
    return res;
}

inline ScenarioResult run_coeffs(const RunConfig& rc) {
    std::vector<std::vector<std::string>> rows;
    ScenarioResult res;
    res.summary.emplace_back("scenario", "coeffs");
    res.summary.emplace_back("picture", rc.picture);

    if (rc.picture == "em") {
        const MediumSample med = rc.synth_n
                                     ? synthetic_sample(rc.omega, *rc.synth_n, *rc.synth_mu)
                                     : sample_medium(rc.medium, rc.omega);
        if (!med.propagating())
            throw StopbandError("coeffs scenario: no propagating index at the operating frequency");
        for (const double theta : rc.angles) {
            const auto r = refract_em(make_em_incident(rc.omega, theta), med);
            rows.push_back({format_double(theta), format_double(r.T), format_double(r.R),
                            format_double(r.tau.real()), format_double(r.tau.imag()),
                            format_double(r.rho.real()), format_double(r.rho.imag()),
                            r.evanescent() ? "evanescent" : "propagating"});
        }
        res.summary.emplace_back("omega", format_double(rc.omega));
        res.summary.emplace_back("n", format_double(med.n));
        res.summary.emplace_back("mu", format_double(med.mu.real()));
    } else {
        const KleinStep step{rc.klein_potential, rc.klein_mass, rc.klein_energy};
        for (const double theta : rc.angles) {
            const auto r = refract_kg(step, make_kg_incident(step, theta));
            rows.push_back({format_double(theta), format_double(r.T), format_double(r.R),
                            format_double(r.tau.real()), format_double(r.tau.imag()),
                            format_double(r.rho.real()), format_double(r.rho.imag()),
                            to_string(r.branch)});
        }
        res.summary.emplace_back("energy_uev", format_double(joule_to_uev(rc.klein_energy)));
        res.summary.emplace_back("potential_uev",
                                 format_double(joule_to_uev(rc.klein_potential)));
        res.summary.emplace_back(
            "rest_energy_uev",
            format_double(joule_to_uev(rc.klein_mass * speed_of_light * speed_of_light)));
    }
    res.summary.emplace_back("rows", std::to_string(rows.size()));

    const auto table = rc.out_prefix.string() + ".table.csv";
    write_table_csv(table, {"theta_i", "T", "R", "tau_re", "tau_im", "rho_re", "rho_im", "regime"},
                    rows);
    res.files.emplace_back(table);
    return res;
}

inline ScenarioResult run_sweep(const RunConfig& rc) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(rc.sweep_count));
    if (rc.sweep_mode == "grid") {
        for (int i = 0; i < rc.sweep_count; ++i)
            values.push_back(rc.sweep_start +
                             i * (rc.sweep_stop - rc.sweep_start) / (rc.sweep_count - 1));
    } else {
        std::mt19937_64 rng(rc.seed);
        std::uniform_real_distribution<double> dist(rc.sweep_start, rc.sweep_stop);
        for (int i = 0; i < rc.sweep_count; ++i) values.push_back(dist(rng));
        std::sort(values.begin(), values.end());
    }

    const bool em = rc.picture == "em";
    const std::string& p = rc.sweep_parameter;
    std::optional<MediumSample> fixed_sample;
    if (em && p == "theta_i")
        fixed_sample = rc.synth_n ? detail::synthetic_sample(rc.omega, *rc.synth_n, *rc.synth_mu)
                                  : sample_medium(rc.medium, rc.omega);

    std::vector<std::vector<std::string>> rows;
    long skipped = 0;
    for (const double v : values) {
        try {
            if (em) {
                MediumSample med;
                double theta = rc.beam_theta_i;
                if (p == "theta_i") {
                    med = *fixed_sample;
                    theta = v;
                } else if (p == "omega") {
                    med = sample_medium(rc.medium, v);
                } else if (p == "n") {
                    med = synthetic_sample(rc.omega, v, *rc.synth_mu);
                } else { // mu
                    med = synthetic_sample(rc.omega, *rc.synth_n, v);
                }
                if (!med.propagating()) {
                    ++skipped;
                    continue;
                }
                const double inc_omega = p == "omega" ? v : rc.omega;
                const auto r = refract_em(make_em_incident(inc_omega, theta), med);
                rows.push_back({format_double(v), format_double(r.T), format_double(r.R),
                                r.evanescent() ? "evanescent" : "propagating"});
            } else {
                double energy = rc.klein_energy;
                double potential = rc.klein_potential;
                double theta = rc.beam_theta_i;
                if (p == "theta_i")
                    theta = v;
                else if (p == "potential_uev")
                    potential = uev_to_joule(v);
                else
                    energy = uev_to_joule(v);
                const KleinStep step{potential, rc.klein_mass, energy};
                const auto r = refract_kg(step, make_kg_incident(step, theta));
                rows.push_back({format_double(v), format_double(r.T), format_double(r.R),
                                to_string(r.branch)});
            }
        } catch (const std::domain_error&) {
            ++skipped;
        } catch (const std::invalid_argument&) {
            ++skipped;
        }
    }
    if (rows.empty())
        throw std::domain_error("sweep scenario: every sampled point was rejected");

    ScenarioResult res;
    res.summary.emplace_back("scenario", "sweep");
    res.summary.emplace_back("picture", rc.picture);
    res.summary.emplace_back("parameter", rc.sweep_parameter);
    res.summary.emplace_back("mode", rc.sweep_mode);
    res.summary.emplace_back("start", format_double(rc.sweep_start));
    res.summary.emplace_back("stop", format_double(rc.sweep_stop));
    res.summary.emplace_back("requested", std::to_string(rc.sweep_count));
    res.summary.emplace_back("rows", std::to_string(rows.size()));
    res.summary.emplace_back("skipped", std::to_string(skipped));
    if (rc.sweep_mode == "random") res.summary.emplace_back("seed", std::to_string(rc.seed));

    const auto table = rc.out_prefix.string() + ".table.csv";
    write_table_csv(table, {"value", "T", "R", "regime"}, rows);
    res.files.emplace_back(table);
    return res;
}

} // namespace detail

// Execute a parsed scenario and write its artifacts next to out_prefix.
// The summary is returned and also written to <prefix>.summary.txt.
[[nodiscard]] inline ScenarioResult run_scenario(const RunConfig& rc) {
    detail::ensure_parent_dir(rc.out_prefix);
    ScenarioResult res;
    switch (rc.scenario) {
        case Scenario::lhm: res = detail::run_lhm(rc); break;
        case Scenario::klein: res = detail::run_klein(rc); break;
        case Scenario::map: res = detail::run_map(rc); break;
        case Scenario::coeffs: res = detail::run_coeffs(rc); break;
        case Scenario::sweep: res = detail::run_sweep(rc); break;
    }
    const auto summary_path = rc.out_prefix.string() + ".summary.txt";
    write_summary(summary_path, res.summary);
    res.files.emplace_back(summary_path);
    return res;
}

} // namespace kleinref
