#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "arraygain/gain_pattern.hpp"
#include "arraygain/geometry.hpp"

namespace arraygain {

/// Largest dB gap between any two elements at one direction.
inline double max_pairwise_variation(const GainPattern& pattern, const Direction& dir) {
    const auto db = pattern.gains_db(dir);
    const auto [lo, hi] = std::minmax_element(db.begin(), db.end());
    return *hi - *lo;
}

struct DynamicRangeRecord {
    double theta = 0.0;  // radians
    double max_db = 0.0;
    double min_db = 0.0;
    double mean_db = 0.0;  // mean of linear power, expressed in dB
};

/// Per zenith angle, extrema and mean taken jointly over elements and the azimuth grid.
inline std::vector<DynamicRangeRecord> dynamic_range_profile(const GainPattern& pattern,
                                                             const std::vector<double>& theta_grid,
                                                             const std::vector<double>& phi_grid) {
    detail::require(!theta_grid.empty() && !phi_grid.empty(), "dynamic range needs nonempty angle grids");
    std::vector<DynamicRangeRecord> out;
    out.reserve(theta_grid.size());
    for (double theta : theta_grid) {
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        double sum_lin = 0.0;
        std::size_t n = 0;
        for (double phi : phi_grid) {
            for (double g : pattern.gains_db({theta, phi})) {
                hi = std::max(hi, g);
                lo = std::min(lo, g);
                sum_lin += db_to_linear(g);
                ++n;
            }
        }
        // clamp: the linear mean can round a hair outside [lo, hi] when all gains coincide
        const double mean = std::clamp(linear_to_db(sum_lin / static_cast<double>(n)), lo, hi);
        out.push_back({theta, hi, lo, mean});
    }
    return out;
}

/// Element gains in dB relative to the array-mean linear power at one direction.
inline std::vector<double> panel_map(const GainPattern& pattern, const Direction& dir, const ArrayGeometry& geom) {
    geom.validate();
    detail::require(geom.size() == pattern.element_count(), "panel map: geometry and pattern element counts differ");
    auto db = pattern.gains_db(dir);
    double sum_lin = 0.0;
    for (double g : db) sum_lin += db_to_linear(g);
    const double ref = linear_to_db(sum_lin / static_cast<double>(db.size()));
    for (double& g : db) g -= ref;
    return db;
}

}  // namespace arraygain
