#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "arraygain/errors.hpp"
#include "arraygain/gain_pattern.hpp"
#include "arraygain/gain_stats.hpp"
#include "arraygain/geometry.hpp"
#include "arraygain/scenario.hpp"

#ifndef ARRAYGAIN_VERSION
#define ARRAYGAIN_VERSION "0.0.0"
#endif

namespace arraygain {

inline constexpr const char* kVersion = ARRAYGAIN_VERSION;
inline constexpr const char* kRatesHeader = "snr_db,array,detector,user_class,mean_rate_bps_hz,std_error,excluded_trials";

// Shortest round-trip-safe text for a double; locale independent.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // prefer the short form when it round-trips
    for (int prec = 6; prec < 17; ++prec) {
        char shorter[32];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

inline void write_rates_csv(std::ostream& out, const RateCurves& curves) {
    out << kRatesHeader << '\n';
    for (const auto& r : curves.records)
        out << format_number(r.snr_db) << ',' << r.array << ',' << to_string(r.detector) << ','
            << to_string(r.user_class) << ',' << format_number(r.mean_rate) << ',' << format_number(r.std_error)
            << ',' << r.excluded_trials << '\n';
}

namespace detail {

inline void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory", dir.string());
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file", path.string());
    writer(out);
    out.flush();
    if (!out) throw IoError("write failed", path.string());
}

}  // namespace detail

struct EmittedFiles {
    std::filesystem::path rates_csv;
    std::filesystem::path manifest;
};

/// Writes rates.csv and manifest.json into `dir`. Output depends only on the
/// curves and the config, so identical runs produce identical bytes.
inline EmittedFiles emit_results(const RateCurves& curves, const ScenarioConfig& config,
                                 const std::filesystem::path& dir) {
    detail::ensure_directory(dir);
    EmittedFiles files{dir / "rates.csv", dir / "manifest.json"};
    detail::write_file(files.rates_csv, [&](std::ostream& out) { write_rates_csv(out, curves); });
    const nlohmann::json manifest = {{"artifact", "arraygain"},
                                     {"version", kVersion},
                                     {"seed", config.seed},
                                     {"records", curves.records.size()},
                                     {"config", to_json(config)}};
    detail::write_file(files.manifest, [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });
    return files;
}

struct GainStatsOptions {
    std::vector<double> theta_grid_deg = detail::arange(-75.0, 75.0, 5.0);
    std::vector<double> phi_grid_deg{90.0};
    std::vector<double> panel_thetas_deg{40.0, -40.0};
    double panel_phi_deg = 90.0;
};

struct GainStatsFiles {
    std::filesystem::path variation;
    std::filesystem::path dynamic_range;
    std::filesystem::path panel_map;
};

/// Writes variation.csv, dynamic_range.csv and panel_map.csv for one pattern.
inline GainStatsFiles gain_stats_report(const GainPattern& pattern, const ArrayGeometry& geom,
                                        const GainStatsOptions& options, const std::filesystem::path& dir) {
    geom.validate();
    detail::require(pattern.element_count() == geom.size(), "pattern element count must equal geometry size");
    detail::require(!options.theta_grid_deg.empty() && !options.phi_grid_deg.empty(),
                    "gain statistics need nonempty angle grids");
    detail::ensure_directory(dir);
    GainStatsFiles files{dir / "variation.csv", dir / "dynamic_range.csv", dir / "panel_map.csv"};

    detail::write_file(files.variation, [&](std::ostream& out) {
        out << "theta_deg,phi_deg,max_pairwise_variation_db\n";
        for (double t : options.theta_grid_deg)
            for (double p : options.phi_grid_deg)
                out << format_number(t) << ',' << format_number(p) << ','
                    << format_number(max_pairwise_variation(pattern, Direction::from_degrees(t, p))) << '\n';
    });

    std::vector<double> thetas, phis;
    for (double t : options.theta_grid_deg) thetas.push_back(deg_to_rad(t));
    for (double p : options.phi_grid_deg) phis.push_back(deg_to_rad(p));
    const auto profile = dynamic_range_profile(pattern, thetas, phis);
    detail::write_file(files.dynamic_range, [&](std::ostream& out) {
        out << "theta_deg,max_db,min_db,mean_db,range_db\n";
        for (std::size_t i = 0; i < profile.size(); ++i) {
            const auto& r = profile[i];
            out << format_number(options.theta_grid_deg[i]) << ',' << format_number(r.max_db) << ','
                << format_number(r.min_db) << ',' << format_number(r.mean_db) << ','
                << format_number(r.max_db - r.min_db) << '\n';
        }
    });

    const auto positions = element_positions(geom);
    detail::write_file(files.panel_map, [&](std::ostream& out) {
        out << "theta_deg,phi_deg,element,row,col,x_m,y_m,gain_db_normalized\n";
        for (double t : options.panel_thetas_deg) {
            const auto map = panel_map(pattern, Direction::from_degrees(t, options.panel_phi_deg), geom);
            for (std::size_t m = 0; m < map.size(); ++m)
                out << format_number(t) << ',' << format_number(options.panel_phi_deg) << ',' << m << ','
                    << m % geom.rows << ',' << m / geom.rows << ',' << format_number(positions[m].x) << ','
                    << format_number(positions[m].y) << ',' << format_number(map[m]) << '\n';
        }
    });
    return files;
}

}  // namespace arraygain
