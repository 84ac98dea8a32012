#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "kleinref/constants.hpp"
#include "kleinref/em_scatter.hpp"
#include "kleinref/errors.hpp"
#include "kleinref/kg_scatter.hpp"
#include "kleinref/types.hpp"

// Angular-spectrum beams: a finite-width packet is a Gaussian-weighted fan
// of plane waves around a central incidence angle. Each component scatters
// independently at z = 0; superposing the scattered components on a grid
// renders the incident, reflected and (negatively) refracted beams.
//
// Grid assembly is bitwise deterministic: components are brought into a
// canonical order and every grid point accumulates them in that exact
// sequence, so the worker-thread count never changes a single bit.

namespace kleinref {

struct BeamSpec {
    double center;        // EM: angular frequency, rad/s; KG: energy, J
    double theta_i;       // beam axis, rad from the normal
    double angular_sigma; // Gaussian angular spread, rad
    int n_components;     // odd, >= 1
};

struct PlaneWaveComponent {
    double angular_rate; // time-phase rate: omega (EM) or E/hbar (KG), rad/s
    double kx;           // rad/m
    double kz;           // rad/m, > 0
    double theta;        // rad, angle of this component
    Complex amplitude;   // spectral weight; sum of |amplitude|^2 over the fan is 1
};

inline void validate_beam(const BeamSpec& b) {
    if (!(b.center > 0.0) || !std::isfinite(b.center))
        throw std::invalid_argument("BeamSpec: center must be finite and > 0");
    if (b.n_components < 1 || b.n_components % 2 == 0)
        throw std::invalid_argument("BeamSpec: n_components must be odd and >= 1");
    if (!(b.angular_sigma > 0.0) || !(b.angular_sigma < pi / 8.0))
        throw std::invalid_argument("BeamSpec: angular_sigma must lie in (0, pi/8)");
    if (!(b.theta_i - 3.0 * b.angular_sigma > -pi / 2.0) ||
        !(b.theta_i + 3.0 * b.angular_sigma < pi / 2.0))
        throw std::invalid_argument("BeamSpec: the +-3 sigma fan must stay within (-pi/2, pi/2)");
}

// Gaussian fan over angle at a single wavenumber/rate. Offsets are built as
// (j-h)*step so the fan is exactly symmetric about the axis and the weights
// pair up bitwise; the total spectral power is normalized to 1.
[[nodiscard]] inline std::vector<PlaneWaveComponent>
build_spectrum(const BeamSpec& b, double wavenumber, double angular_rate) {
    validate_beam(b);
    if (!(wavenumber > 0.0) || !std::isfinite(wavenumber))
        throw std::invalid_argument("build_spectrum: wavenumber must be finite and > 0");

    const int n = b.n_components;
    const int h = (n - 1) / 2;
    const double step = h > 0 ? 3.0 * b.angular_sigma / h : 0.0;

    std::vector<PlaneWaveComponent> out;
    out.reserve(static_cast<std::size_t>(n));
    double power = 0.0;
    for (int j = 0; j < n; ++j) {
        const double delta = (j - h) * step;
        const double theta = b.theta_i + delta;
        const double w = std::exp(-delta * delta / (2.0 * b.angular_sigma * b.angular_sigma));
        out.push_back({angular_rate, wavenumber * std::sin(theta), wavenumber * std::cos(theta),
                       theta, Complex(w)});
        power += w * w;
    }
    const double scale = 1.0 / std::sqrt(power);
    for (auto& c : out) c.amplitude *= scale;
    return out;
}

[[nodiscard]] inline std::vector<PlaneWaveComponent> build_spectrum_em(const BeamSpec& b) {
    return build_spectrum(b, b.center / speed_of_light, b.center);
}

[[nodiscard]] inline std::vector<PlaneWaveComponent> build_spectrum_kg(const BeamSpec& b, double mass) {
    const double mc2 = mass * speed_of_light * speed_of_light;
    if (!(mass >= 0.0) || !std::isfinite(mass))
        throw std::invalid_argument("build_spectrum_kg: mass must be finite and >= 0");
    if (!(b.center > mc2))
        throw std::invalid_argument("build_spectrum_kg: energy must exceed m c^2");
    const double k = std::sqrt((b.center - mc2) * (b.center + mc2)) / (speed_of_light * hbar);
    return build_spectrum(b, k, b.center / hbar);
}

// Two-dimensional fan: Gaussian over angle and over the time-phase rate
// (a mildly polychromatic packet). k_of_rate maps a rate to the incident
// wavenumber at that rate. n_rates odd; total power normalized to 1.
template <typename KOfRate>
[[nodiscard]] std::vector<PlaneWaveComponent>
build_spectrum_polychromatic(const BeamSpec& b, double rate_center, double rate_sigma,
                             int n_rates, KOfRate k_of_rate) {
    validate_beam(b);
    if (n_rates < 1 || n_rates % 2 == 0)
        throw std::invalid_argument("build_spectrum_polychromatic: n_rates must be odd and >= 1");
    if (!(rate_sigma > 0.0) || !(rate_center - 3.0 * rate_sigma > 0.0))
        throw std::invalid_argument("build_spectrum_polychromatic: rate fan must stay positive");

    const int hr = (n_rates - 1) / 2;
    const double rstep = hr > 0 ? 3.0 * rate_sigma / hr : 0.0;
    std::vector<PlaneWaveComponent> out;
    out.reserve(static_cast<std::size_t>(n_rates) * static_cast<std::size_t>(b.n_components));
    double power = 0.0;
    for (int r = 0; r < n_rates; ++r) {
        const double drate = (r - hr) * rstep;
        const double rate = rate_center + drate;
        const double wr = std::exp(-drate * drate / (2.0 * rate_sigma * rate_sigma));
        const double k = k_of_rate(rate);
        if (!(k > 0.0))
            throw std::invalid_argument("build_spectrum_polychromatic: k_of_rate must be > 0");
        BeamSpec mono = b;
        mono.center = rate; // informational; wavenumber is fixed below
        for (const auto& c : build_spectrum(mono, k, rate)) {
            PlaneWaveComponent pc = c;
            pc.amplitude *= wr;
            power += std::norm(pc.amplitude);
            out.push_back(pc);
        }
    }
    const double scale = 1.0 / std::sqrt(power);
    for (auto& c : out) c.amplitude *= scale;
    return out;
}

// One spectral component after scattering: everything needed to evaluate the
// field on either side of the interface.
struct ScatteredComponent {
    Complex amplitude;   // incident spectral weight
    double angular_rate; // rad/s
    double kx;           // rad/m
    double kz;           // rad/m
    Complex qz;          // transmitted normal wavenumber, rad/m
    Complex tau;         // transmitted amplitude
    Complex rho;         // reflected amplitude
};

[[nodiscard]] inline ScatteredComponent make_scattered(const PlaneWaveComponent& c,
                                                       const EmScatterResult& r) {
    return {c.amplitude, c.angular_rate, c.kx, c.kz, r.qz, r.tau, r.rho};
}

[[nodiscard]] inline ScatteredComponent make_scattered(const PlaneWaveComponent& c,
                                                       const KgScatterResult& r) {
    return {c.amplitude, c.angular_rate, c.kx, c.kz, r.qz, r.tau, r.rho};
}

struct GridGeometry {
    double x0 = 0.0, x1 = 0.0; // m, x range
    double z0 = 0.0, z1 = 0.0; // m, z range; must straddle the interface z = 0
    int nx = 0, nz = 0;        // sample counts per axis

    [[nodiscard]] double dx() const { return (x1 - x0) / (nx - 1); }
    [[nodiscard]] double dz() const { return (z1 - z0) / (nz - 1); }
    [[nodiscard]] double x(int i) const { return x0 + i * dx(); }
    [[nodiscard]] double z(int j) const { return z0 + j * dz(); }
};

inline void validate_grid(const GridGeometry& g) {
    if (g.nx < 2 || g.nz < 2)
        throw std::invalid_argument("GridGeometry: nx and nz must be >= 2");
    if (!(g.x1 > g.x0) || !std::isfinite(g.x0) || !std::isfinite(g.x1))
        throw std::invalid_argument("GridGeometry: need finite x1 > x0");
    if (!(g.z0 < 0.0) || !(g.z1 > 0.0) || !std::isfinite(g.z0) || !std::isfinite(g.z1))
        throw std::invalid_argument("GridGeometry: z range must straddle the interface (z0 < 0 < z1)");
}

// Row-major storage, x outer and z inner (index = ix * nz + iz).
struct FieldGrid {
    GridGeometry geom;
    std::vector<Complex> values;
    std::vector<double> density; // |values|^2, recomputed by assemble_field

    [[nodiscard]] std::size_t index(int ix, int iz) const {
        return static_cast<std::size_t>(ix) * static_cast<std::size_t>(geom.nz) +
               static_cast<std::size_t>(iz);
    }
};

namespace detail {

// e^{i qz z} for complex qz with Im(qz) >= 0 and z >= 0: pure decay times
// a rotation, without the full complex exp.
[[nodiscard]] inline Complex transmitted_phase(Complex qz, double z) {
    const double decay = qz.imag() == 0.0 ? 1.0 : std::exp(-qz.imag() * z);
    return decay * cis(qz.real() * z);
}

// Canonical component order: grid sums follow this sequence at every point.
inline void canonicalize(std::vector<ScatteredComponent>& comps) {
    std::stable_sort(comps.begin(), comps.end(),
                     [](const ScatteredComponent& a, const ScatteredComponent& b) {
                         if (a.angular_rate != b.angular_rate) return a.angular_rate < b.angular_rate;
                         if (a.kx != b.kx) return a.kx < b.kx;
                         return a.kz < b.kz;
                     });
}

inline void require_resolved(const std::vector<ScatteredComponent>& comps, const GridGeometry& g) {
    double kmax = 0.0;
    for (const auto& c : comps) {
        kmax = std::max(kmax, std::hypot(c.kx, c.kz));
        kmax = std::max(kmax, std::hypot(c.kx, c.qz.real()));
    }
    const double lambda_min = 2.0 * pi / kmax;
    const double coarse = std::max(g.dx(), g.dz());
    if (!(8.0 * coarse <= lambda_min))
        throw SamplingError("grid resolves " + std::to_string(lambda_min / coarse) +
                            " points per shortest wavelength; need >= 8");
}

} // namespace detail

// Superpose all scattered components on the grid at time t. threads == 0
// picks the hardware concurrency; any positive count gives byte-identical
// results because rows are independent and each point sums components in
// canonical order.
[[nodiscard]] inline FieldGrid assemble_field(std::vector<ScatteredComponent> comps,
                                              const GridGeometry& geom, double t,
                                              int threads = 0) {
    if (comps.empty())
        throw std::invalid_argument("assemble_field: component list is empty");
    if (threads < 0)
        throw std::invalid_argument("assemble_field: threads must be >= 0");
    validate_grid(geom);
    detail::canonicalize(comps);
    detail::require_resolved(comps, geom);

    // Fold the time phase into each amplitude once.
    std::vector<ScatteredComponent> cs = std::move(comps);
    for (auto& c : cs) c.amplitude *= cis(-c.angular_rate * t);

    FieldGrid grid;
    grid.geom = geom;
    grid.values.assign(static_cast<std::size_t>(geom.nx) * static_cast<std::size_t>(geom.nz),
                       Complex{});
    grid.density.assign(grid.values.size(), 0.0);

    const auto fill_rows = [&](int row_begin, int row_end) {
        for (int ix = row_begin; ix < row_end; ++ix) {
            const double x = geom.x(ix);
            Complex* row = grid.values.data() + grid.index(ix, 0);
            for (const auto& c : cs) {
                const Complex u = c.amplitude * cis(c.kx * x);
                const Complex ut = u * c.tau;
                for (int iz = 0; iz < geom.nz; ++iz) {
                    const double z = geom.z(iz);
                    if (z < 0.0) {
                        const Complex fwd = cis(c.kz * z);
                        row[iz] += u * (fwd + c.rho * std::conj(fwd));
                    } else {
                        row[iz] += ut * detail::transmitted_phase(c.qz, z);
                    }
                }
            }
            for (int iz = 0; iz < geom.nz; ++iz)
                grid.density[grid.index(ix, iz)] = std::norm(row[iz]);
        }
    };

    int n_threads = threads > 0 ? threads
                                : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
    n_threads = std::min(n_threads, geom.nx);
    if (n_threads <= 1) {
        fill_rows(0, geom.nx);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        const int per = geom.nx / n_threads;
        const int extra = geom.nx % n_threads;
        int begin = 0;
        for (int i = 0; i < n_threads; ++i) {
            const int end = begin + per + (i < extra ? 1 : 0);
            pool.emplace_back(fill_rows, begin, end);
            begin = end;
        }
        for (auto& th : pool) th.join();
    }
    return grid;
}

enum class Side { incident, transmitted };

// Field value and first derivatives from one side's closed form; evaluating
// both sides at z = 0 probes interface continuity.
struct FieldSample {
    Complex value;
    Complex ddx;
    Complex ddz;
};

[[nodiscard]] inline FieldSample evaluate_side(std::vector<ScatteredComponent> comps, double x,
                                               double z, double t, Side side) {
    if (comps.empty())
        throw std::invalid_argument("evaluate_side: component list is empty");
    if (side == Side::incident ? z > 0.0 : z < 0.0)
        throw std::domain_error("evaluate_side: point lies outside the requested side");
    detail::canonicalize(comps);

    FieldSample s;
    const Complex i_unit{0.0, 1.0};
    for (const auto& c : comps) {
        const Complex u = c.amplitude * cis(-c.angular_rate * t) * cis(c.kx * x);
        if (side == Side::incident) {
            const Complex fwd = cis(c.kz * z);
            const Complex bwd = std::conj(fwd);
            const Complex both = fwd + c.rho * bwd;
            s.value += u * both;
            s.ddx += i_unit * c.kx * u * both;
            s.ddz += i_unit * c.kz * u * (fwd - c.rho * bwd);
        } else {
            const Complex w = u * c.tau * detail::transmitted_phase(c.qz, z);
            s.value += w;
            s.ddx += i_unit * c.kx * w;
            s.ddz += i_unit * c.qz * w;
        }
    }
    return s;
}

enum class HalfPlane { incident, transmitted };

// Beam axis in the chosen half plane: the density ridge, found by fitting a
// mass-weighted straight line through the per-row density centroids x_bar(z).
// (The raw covariance eigenvector is biased toward the window diagonal once
// the beam width is comparable to the visible length; the row-centroid ridge
// is exact for any symmetric beam profile.) Returns the signed angle of the
// ridge measured from +z toward +x, in (-pi/2, pi/2).
[[nodiscard]] inline double centroid_angle(const FieldGrid& grid, HalfPlane half) {
    validate_grid(grid.geom);
    if (grid.density.size() !=
        static_cast<std::size_t>(grid.geom.nx) * static_cast<std::size_t>(grid.geom.nz))
        throw std::invalid_argument("centroid_angle: density size does not match the geometry");

    double w_sum = 0.0, sx = 0.0, sz = 0.0;
    double sxx = 0.0, sxz = 0.0, szz = 0.0;
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    long points = 0;
    // Ridge-fit accumulators: one (mass, centroid) sample per grid row.
    double fw = 0.0, fz = 0.0, fx = 0.0, fzz = 0.0, fzx = 0.0;

    for (int iz = 0; iz < grid.geom.nz; ++iz) {
        const double z = grid.geom.z(iz);
        if (half == HalfPlane::transmitted ? !(z > 0.0) : !(z < 0.0)) continue;
        double row_mass = 0.0, row_mx = 0.0;
        for (int ix = 0; ix < grid.geom.nx; ++ix) {
            const double x = grid.geom.x(ix);
            const double d = grid.density[grid.index(ix, iz)];
            ++points;
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
            w_sum += d;
            sx += d * x;
            sz += d * z;
            sxx += d * x * x;
            sxz += d * x * z;
            szz += d * z * z;
            row_mass += d;
            row_mx += d * x;
        }
        if (row_mass > 0.0) {
            const double xbar = row_mx / row_mass;
            fw += row_mass;
            fz += row_mass * z;
            fx += row_mass * xbar;
            fzz += row_mass * z * z;
            fzx += row_mass * z * xbar;
        }
    }

    if (points == 0)
        throw UndefinedAxisError("centroid_angle: the half-plane holds no grid points");
    if (!(w_sum > 0.0) || !(dmax > 0.0))
        throw UndefinedAxisError("centroid_angle: density vanishes on the half-plane");
    if (dmax - dmin <= 1e-9 * dmax)
        throw UndefinedAxisError("centroid_angle: uniform density has no principal axis");

    const double mx = sx / w_sum, mz = sz / w_sum;
    const double cxx = sxx / w_sum - mx * mx;
    const double cxz = sxz / w_sum - mx * mz;
    const double czz = szz / w_sum - mz * mz;
    const double disc = std::hypot(0.5 * (cxx - czz), cxz);
    if (!(disc > 1e-9 * 0.5 * (cxx + czz)))
        throw UndefinedAxisError("centroid_angle: density is isotropic, no principal axis");

    const double fmz = fz / fw, fmx = fx / fw;
    const double var_z = fzz / fw - fmz * fmz;
    const double cov_zx = fzx / fw - fmz * fmx;
    if (!(var_z > 0.0))
        throw UndefinedAxisError("centroid_angle: density has no z extent to fit a ridge");
    return std::atan(cov_zx / var_z);
}

} // namespace kleinref
