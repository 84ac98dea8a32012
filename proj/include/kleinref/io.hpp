#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "kleinref/config.hpp"
#include "kleinref/errors.hpp"
#include "kleinref/wavepacket.hpp"

// Plain-text artifacts. Numbers are serialized with the shortest decimal
// that round-trips the exact binary64 value, so parse(format(x)) == x
// bitwise and reruns diff clean.

namespace kleinref {

[[nodiscard]] inline std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{})
        throw IoError("format_double: value does not fit the buffer");
    return {buf, ptr};
}

[[nodiscard]] inline double parse_double(std::string_view text) {
    return detail::parse_double_strict(text, "parse_double");
}

namespace detail {

[[nodiscard]] inline std::ofstream open_out(const std::filesystem::path& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

inline void finish_out(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out)
        throw IoError("failed writing '" + path.string() + "'");
}

} // namespace detail

// Density table, header "x,z,value", one row per grid point in storage
// order (x outer, z inner).
inline void write_density_csv(const std::filesystem::path& path, const FieldGrid& grid) {
    auto out = detail::open_out(path, false);
    out << "x,z,value\n";
    for (int ix = 0; ix < grid.geom.nx; ++ix) {
        const std::string xs = format_double(grid.geom.x(ix));
        for (int iz = 0; iz < grid.geom.nz; ++iz) {
            out << xs << ',' << format_double(grid.geom.z(iz)) << ','
                << format_double(grid.density[grid.index(ix, iz)]) << '\n';
        }
    }
    detail::finish_out(out, path);
}

// Binary 8-bit grayscale PPM (P6, equal channels) plus a sidecar recording
// the linear map. Image rows run from x1 down to x0 (x points up), columns
// from z0 to z1; value v maps to floor(255 (v - vmin)/(vmax - vmin) + 0.5).
inline void write_density_ppm(const std::filesystem::path& ppm_path,
                              const std::filesystem::path& scale_path, const FieldGrid& grid) {
    double vmin = grid.density.empty() ? 0.0 : grid.density.front();
    double vmax = vmin;
    for (const double d : grid.density) {
        vmin = std::min(vmin, d);
        vmax = std::max(vmax, d);
    }
    const double span = vmax - vmin;

    auto img = detail::open_out(ppm_path, true);
    img << "P6\n" << grid.geom.nz << ' ' << grid.geom.nx << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(grid.geom.nz) * 3u);
    for (int ix = grid.geom.nx - 1; ix >= 0; --ix) {
        for (int iz = 0; iz < grid.geom.nz; ++iz) {
            const double v = grid.density[grid.index(ix, iz)];
            const double scaled = span > 0.0 ? 255.0 * (v - vmin) / span : 0.0;
            const auto byte = static_cast<unsigned char>(std::floor(scaled + 0.5));
            row[3u * static_cast<std::size_t>(iz)] = byte;
            row[3u * static_cast<std::size_t>(iz) + 1u] = byte;
            row[3u * static_cast<std::size_t>(iz) + 2u] = byte;
        }
        img.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    detail::finish_out(img, ppm_path);

    auto scale = detail::open_out(scale_path, false);
    scale << "vmin=" << format_double(vmin) << '\n' << "vmax=" << format_double(vmax) << '\n';
    detail::finish_out(scale, scale_path);
}

inline void write_table_csv(const std::filesystem::path& path,
                            const std::vector<std::string>& header,
                            const std::vector<std::vector<std::string>>& rows) {
    auto out = detail::open_out(path, false);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& r : rows) {
        if (r.size() != header.size())
            throw IoError("write_table_csv: row width does not match the header");
        for (std::size_t i = 0; i < r.size(); ++i)
            out << (i ? "," : "") << r[i];
        out << '\n';
    }
    detail::finish_out(out, path);
}

// key=value lines, one per entry, in the given order.
inline void write_summary(const std::filesystem::path& path,
                          const std::vector<std::pair<std::string, std::string>>& entries) {
    auto out = detail::open_out(path, false);
    for (const auto& [key, value] : entries)
        out << key << '=' << value << '\n';
    detail::finish_out(out, path);
}

// Minimal CSV reader for round-trip tests: no quoting, rows split on ','.
[[nodiscard]] inline std::vector<std::vector<std::string>>
read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "' for reading");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> row;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            row.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace kleinref
