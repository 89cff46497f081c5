#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arraygain/errors.hpp"

namespace arraygain {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

inline double wavelength_from_frequency(double freq_hz) {
    detail::require(std::isfinite(freq_hz) && freq_hz > 0.0, "carrier frequency must be positive");
    return kSpeedOfLight / freq_hz;
}

/// Arrival direction. theta is the signed zenith angle from the array normal,
/// phi the azimuth; both in radians.
struct Direction {
    double theta = 0.0;
    double phi = 0.0;

    static Direction from_degrees(double theta_deg, double phi_deg) {
        return {deg_to_rad(theta_deg), deg_to_rad(phi_deg)};
    }

    double theta_deg() const { return rad_to_deg(theta); }
    double phi_deg() const { return rad_to_deg(phi); }

    void validate() const {
        detail::require(std::isfinite(theta) && std::isfinite(phi), "direction angles must be finite");
        detail::require(std::abs(theta) < kPi / 2.0, "zenith angle must satisfy |theta| < 90 deg");
    }
};

/// Rectangular grid of rows x cols elements with uniform spacing.
///
/// Element m sits at grid position (p, q) with m = p + q * rows (column-stacked).
/// Every module that indexes elements uses this ordering.
struct ArrayGeometry {
    std::size_t rows = 1;
    std::size_t cols = 1;
    double spacing = 0.0;     // meters
    double wavelength = 0.0;  // meters

    static ArrayGeometry from_frequency(std::size_t rows, std::size_t cols, double spacing_m,
                                        double freq_hz) {
        ArrayGeometry g{rows, cols, spacing_m, wavelength_from_frequency(freq_hz)};
        g.validate();
        return g;
    }

    std::size_t size() const { return rows * cols; }
    std::size_t index(std::size_t p, std::size_t q) const { return p + q * rows; }
    double spacing_in_wavelengths() const { return spacing / wavelength; }

    void validate() const {
        detail::require(rows >= 1 && cols >= 1, "array geometry needs at least one row and column");
        detail::require(std::isfinite(spacing) && spacing > 0.0, "element spacing must be positive");
        detail::require(std::isfinite(wavelength) && wavelength > 0.0, "wavelength must be positive");
    }
};

struct ElementPosition {
    double x = 0.0;  // meters, along the row index p
    double y = 0.0;  // meters, along the column index q
};

/// Plane-wave phase signature across the grid:
/// a[p + q*rows] = exp(j 2pi (spacing/lambda) (p sin(theta) + q sin(phi))).
inline Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, const Direction& dir) {
    geom.validate();
    dir.validate();
    const double k = 2.0 * kPi * geom.spacing_in_wavelengths();
    const double u = k * std::sin(dir.theta);
    const double v = k * std::sin(dir.phi);
    Eigen::VectorXcd a(static_cast<Eigen::Index>(geom.size()));
    for (std::size_t q = 0; q < geom.cols; ++q) {
        for (std::size_t p = 0; p < geom.rows; ++p) {
            const double phase = static_cast<double>(p) * u + static_cast<double>(q) * v;
            a[static_cast<Eigen::Index>(geom.index(p, q))] = std::polar(1.0, phase);
        }
    }
    return a;
}

inline std::vector<ElementPosition> element_positions(const ArrayGeometry& geom) {
    geom.validate();
    std::vector<ElementPosition> out(geom.size());
    for (std::size_t q = 0; q < geom.cols; ++q)
        for (std::size_t p = 0; p < geom.rows; ++p)
            out[geom.index(p, q)] = {static_cast<double>(p) * geom.spacing,
                                     static_cast<double>(q) * geom.spacing};
    return out;
}

/// Parses "RxC" (e.g. "4x8") into a row/column pair.
inline std::pair<std::size_t, std::size_t> parse_grid_shape(const std::string& text) {
    const auto x = text.find_first_of("xX");
    if (x == std::string::npos || x == 0 || x + 1 >= text.size())
        throw InvalidInput("grid shape must look like RxC, got '" + text + "'");
    try {
        std::size_t used = 0;
        const auto r = std::stoul(text.substr(0, x), &used);
        if (used != x) throw std::invalid_argument("rows");
        const auto rest = text.substr(x + 1);
        const auto c = std::stoul(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("cols");
        if (r == 0 || c == 0) throw std::invalid_argument("zero");
        return {r, c};
    } catch (const std::logic_error&) {
        throw InvalidInput("grid shape must look like RxC, got '" + text + "'");
    }
}

}  // namespace arraygain
