#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "arraygain/errors.hpp"
#include "arraygain/geometry.hpp"
#include "arraygain/rng.hpp"

namespace arraygain {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Same gain for every element and every direction.
struct UniformPattern {
    std::size_t element_count = 1;
    double gain_db = 0.0;

    void validate() const {
        detail::require(element_count >= 1, "pattern needs at least one element");
        detail::require(std::isfinite(gain_db), "uniform gain must be finite");
    }
};

/// Piecewise-linear curve over |theta| in degrees; held constant beyond the end knots.
class PiecewiseLinear {
public:
    PiecewiseLinear() = default;

    explicit PiecewiseLinear(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
        detail::require(!knots_.empty(), "piecewise-linear curve needs at least one knot");
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            detail::require(std::isfinite(knots_[i].first) && std::isfinite(knots_[i].second),
                            "piecewise-linear knots must be finite");
            if (i > 0)
                detail::require(knots_[i].first > knots_[i - 1].first,
                                "piecewise-linear knots must be strictly increasing");
        }
    }

    double operator()(double x) const {
        if (knots_.empty()) return 0.0;
        if (x <= knots_.front().first) return knots_.front().second;
        if (x >= knots_.back().first) return knots_.back().second;
        const auto hi = std::upper_bound(knots_.begin(), knots_.end(), x,
                                         [](double v, const auto& k) { return v < k.first; });
        const auto lo = hi - 1;
        const double t = (x - lo->first) / (hi->first - lo->first);
        return lo->second + t * (hi->second - lo->second);
    }

    double min_value() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& k : knots_) m = std::min(m, k.second);
        return m;
    }

    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    std::vector<std::pair<double, double>> knots_;
};

/// Inputs for the synthetic embedded-gain model.
///
/// Element gain in dB:
///   peak_db + envelope(|theta|) - spread(|theta|) * (1 + sin(kappa * theta + psi_m)) / 2
/// with theta in radians inside the sine and |theta| in degrees for the curves.
/// envelope is the mean-gain falloff relative to the peak (0 at broadside).
struct SyntheticParams {
    double peak_db = 0.0;
    PiecewiseLinear envelope{{{0.0, 0.0}}};
    PiecewiseLinear spread{{{0.0, 0.0}}};
    double kappa = 6.0;

    void validate() const {
        detail::require(std::isfinite(peak_db), "peak gain must be finite");
        detail::require(std::isfinite(kappa), "modulation frequency must be finite");
        detail::require(!spread.knots().empty() && spread.min_value() >= 0.0,
                        "gain spread must be nonnegative");
        detail::require(!envelope.knots().empty(), "envelope curve is empty");
    }
};

// Default calibrations for the two element types compared in the experiment.
inline SyntheticParams patch_params() {
    return {0.0,
            PiecewiseLinear{{{0.0, 0.0}, {75.0, -6.0}}},
            PiecewiseLinear{{{0.0, 3.0}, {20.0, 3.0}, {60.0, 5.0}, {75.0, 10.0}}},
            6.0};
}

inline SyntheticParams dipole_params() {
    return {-3.0,
            PiecewiseLinear{{{0.0, 0.0}, {75.0, -12.0}}},
            PiecewiseLinear{{{0.0, 10.0}, {60.0, 10.0}, {75.0, 13.0}}},
            6.0};
}

inline constexpr std::uint64_t kPatchPatternSeed = 2017;
inline constexpr std::uint64_t kDipolePatternSeed = 2018;

class SyntheticPattern {
public:
    SyntheticPattern(SyntheticParams params, std::vector<double> phases)
        : params_(std::move(params)), phases_(std::move(phases)) {
        params_.validate();
        detail::require(!phases_.empty(), "pattern needs at least one element");
    }

    std::size_t element_count() const { return phases_.size(); }
    const SyntheticParams& params() const { return params_; }
    const std::vector<double>& phases() const { return phases_; }

    double gain_db(std::size_t element, const Direction& dir) const {
        const double t = std::abs(rad_to_deg(dir.theta));
        const double mod = 0.5 * (1.0 + std::sin(params_.kappa * dir.theta + phases_[element]));
        return params_.peak_db + params_.envelope(t) - params_.spread(t) * mod;
    }

private:
    SyntheticParams params_;
    std::vector<double> phases_;
};

/// Deterministic in (params, seed, element_count): the per-element phases are
/// i.i.d. uniform on [0, 2pi) from a seeded substream.
inline SyntheticPattern synthesize_pattern(const SyntheticParams& params, std::uint64_t seed,
                                           std::size_t element_count) {
    params.validate();
    detail::require(element_count >= 1, "pattern needs at least one element");
    auto rng = substream(seed, StreamTag::PatternPhases, {element_count});
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    std::vector<double> phases(element_count);
    for (auto& p : phases) p = u(rng);
    return SyntheticPattern(params, std::move(phases));
}

/// Per-element gains in dB on a rectangular (theta, phi) grid in degrees,
/// bilinearly interpolated in dB. No extrapolation.
class TabulatedPattern {
public:
    TabulatedPattern(std::vector<double> theta_grid_deg, std::vector<double> phi_grid_deg,
                     std::size_t element_count, std::vector<double> gains_db)
        : theta_(std::move(theta_grid_deg)),
          phi_(std::move(phi_grid_deg)),
          elements_(element_count),
          gains_(std::move(gains_db)) {
        detail::require(elements_ >= 1, "pattern needs at least one element");
        detail::require(!theta_.empty() && !phi_.empty(), "pattern grids must be nonempty");
        detail::require(std::adjacent_find(theta_.begin(), theta_.end(), std::greater_equal<>()) == theta_.end(),
                        "theta grid must be strictly increasing");
        detail::require(std::adjacent_find(phi_.begin(), phi_.end(), std::greater_equal<>()) == phi_.end(),
                        "phi grid must be strictly increasing");
        detail::require(gains_.size() == elements_ * theta_.size() * phi_.size(),
                        "incomplete grid");
        for (double g : gains_) detail::require(std::isfinite(g), "pattern gains must be finite");
    }

    std::size_t element_count() const { return elements_; }
    const std::vector<double>& theta_grid() const { return theta_; }
    const std::vector<double>& phi_grid() const { return phi_; }

    double node(std::size_t element, std::size_t ti, std::size_t pi) const {
        return gains_[(element * theta_.size() + ti) * phi_.size() + pi];
    }

    bool contains(double theta_deg, double phi_deg) const {
        return locate(theta_, theta_deg).has_value() && locate(phi_, phi_deg).has_value();
    }

    double interpolate_deg(std::size_t element, double theta_deg, double phi_deg) const {
        detail::require(element < elements_, "element index out of range");
        const auto tc = locate(theta_, theta_deg);
        const auto pc = locate(phi_, phi_deg);
        if (!tc || !pc)
            throw InvalidInput("direction (" + std::to_string(theta_deg) + ", " + std::to_string(phi_deg) +
                               ") deg lies outside the tabulated grid");
        const auto [i, ti] = *tc;
        const auto [j, tj] = *pc;
        const std::size_t i1 = ti > 0.0 ? i + 1 : i;
        const std::size_t j1 = tj > 0.0 ? j + 1 : j;
        const double g00 = node(element, i, j), g10 = node(element, i1, j);
        const double g01 = node(element, i, j1), g11 = node(element, i1, j1);
        return (1.0 - ti) * (1.0 - tj) * g00 + ti * (1.0 - tj) * g10 + (1.0 - ti) * tj * g01 + ti * tj * g11;
    }

private:
    static constexpr double kSnapDeg = 1e-9;

    // Cell index and fractional position; nullopt outside the hull.
    static std::optional<std::pair<std::size_t, double>> locate(const std::vector<double>& grid, double x) {
        if (!std::isfinite(x)) return std::nullopt;
        if (x < grid.front() - kSnapDeg || x > grid.back() + kSnapDeg) return std::nullopt;
        const auto it = std::lower_bound(grid.begin(), grid.end(), x - kSnapDeg);
        const auto k = static_cast<std::size_t>(it - grid.begin());
        if (k < grid.size() && std::abs(grid[k] - x) <= kSnapDeg) return std::pair{k, 0.0};
        // x sits strictly between grid[k-1] and grid[k]
        const double t = (x - grid[k - 1]) / (grid[k] - grid[k - 1]);
        return std::pair{k - 1, t};
    }

    std::vector<double> theta_;
    std::vector<double> phi_;
    std::size_t elements_;
    std::vector<double> gains_;
};

inline double interpolate_gain(const TabulatedPattern& table, std::size_t element, const Direction& dir) {
    dir.validate();
    return table.interpolate_deg(element, dir.theta_deg(), dir.phi_deg());
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view field, const char* name, std::size_t row) {
    T value{};
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc() || ptr != end)
        throw ParseError("non-numeric " + std::string(name) + " '" + std::string(field) + "'", row);
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) throw ParseError("non-finite " + std::string(name), row);
    }
    return value;
}

}  // namespace detail

/// Reads `element,theta_deg,phi_deg,gain_db` rows into a complete grid.
/// Rows are numbered from 1 at the header line in error messages.
inline TabulatedPattern load_pattern_table(std::istream& in, std::size_t element_count) {
    detail::require(element_count >= 1, "pattern needs at least one element");
    std::string line;
    std::size_t row = 0;
    if (!std::getline(in, line)) throw ParseError("empty pattern table");
    ++row;
    std::string_view header = line;
    if (header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
    const auto cols = detail::split_csv(header);
    if (cols != std::vector<std::string_view>{"element", "theta_deg", "phi_deg", "gain_db"})
        throw ParseError("expected header 'element,theta_deg,phi_deg,gain_db'", row);

    std::map<std::tuple<std::size_t, double, double>, double> cells;
    std::set<double> thetas, phis;
    while (std::getline(in, line)) {
        ++row;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_csv(line);
        if (f.size() != 4) throw ParseError("expected 4 fields, got " + std::to_string(f.size()), row);
        const auto element = detail::parse_number<std::size_t>(f[0], "element", row);
        const auto theta = detail::parse_number<double>(f[1], "theta_deg", row);
        const auto phi = detail::parse_number<double>(f[2], "phi_deg", row);
        const auto gain = detail::parse_number<double>(f[3], "gain_db", row);
        if (element >= element_count)
            throw ParseError("element index " + std::to_string(element) + " out of range (M = " +
                                 std::to_string(element_count) + ")",
                             row);
        if (!cells.emplace(std::tuple{element, theta, phi}, gain).second)
            throw ParseError("duplicate entry for element " + std::to_string(element), row);
        thetas.insert(theta);
        phis.insert(phi);
    }
    if (cells.empty()) throw ParseError("pattern table has no data rows");

    std::vector<double> tg(thetas.begin(), thetas.end()), pg(phis.begin(), phis.end());
    std::vector<double> gains;
    gains.reserve(element_count * tg.size() * pg.size());
    for (std::size_t m = 0; m < element_count; ++m)
        for (double t : tg)
            for (double p : pg) {
                const auto it = cells.find({m, t, p});
                if (it == cells.end()) {
                    std::ostringstream msg;
                    msg << "incomplete grid: element " << m << " has no entry at theta " << t << " deg, phi "
                        << p << " deg";
                    throw ParseError(msg.str());
                }
                gains.push_back(it->second);
            }
    return TabulatedPattern(std::move(tg), std::move(pg), element_count, std::move(gains));
}

inline TabulatedPattern load_pattern_file(const std::string& path, std::size_t element_count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open pattern table", path);
    return load_pattern_table(in, element_count);
}

enum class PatternKind { Uniform, Tabulated, Synthetic };

/// Any of the three gain providers behind one query surface.
class GainPattern {
public:
    GainPattern(UniformPattern p) : impl_(std::move(p)) { std::get<UniformPattern>(impl_).validate(); }
    GainPattern(TabulatedPattern p) : impl_(std::move(p)) {}
    GainPattern(SyntheticPattern p) : impl_(std::move(p)) {}

    static GainPattern uniform(std::size_t element_count, double gain_db = 0.0) {
        return GainPattern(UniformPattern{element_count, gain_db});
    }

    PatternKind kind() const { return static_cast<PatternKind>(impl_.index()); }

    std::size_t element_count() const {
        return std::visit(
            [](const auto& p) -> std::size_t {
                if constexpr (std::is_same_v<std::decay_t<decltype(p)>, UniformPattern>) return p.element_count;
                else return p.element_count();
            },
            impl_);
    }

    double gain_db(std::size_t element, const Direction& dir) const {
        dir.validate();
        detail::require(element < element_count(), "element index out of range");
        return std::visit(
            [&](const auto& p) -> double {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, UniformPattern>) return p.gain_db;
                else if constexpr (std::is_same_v<P, TabulatedPattern>)
                    return p.interpolate_deg(element, dir.theta_deg(), dir.phi_deg());
                else return p.gain_db(element, dir);
            },
            impl_);
    }

    std::vector<double> gains_db(const Direction& dir) const {
        std::vector<double> out(element_count());
        for (std::size_t m = 0; m < out.size(); ++m) out[m] = gain_db(m, dir);
        return out;
    }

    // Whether the provider can answer queries at this direction.
    bool supports(const Direction& dir) const {
        if (std::abs(dir.theta) >= kPi / 2.0 || !std::isfinite(dir.phi)) return false;
        if (const auto* t = std::get_if<TabulatedPattern>(&impl_)) return t->contains(dir.theta_deg(), dir.phi_deg());
        return true;
    }

    const UniformPattern* as_uniform() const { return std::get_if<UniformPattern>(&impl_); }
    const TabulatedPattern* as_tabulated() const { return std::get_if<TabulatedPattern>(&impl_); }
    const SyntheticPattern* as_synthetic() const { return std::get_if<SyntheticPattern>(&impl_); }

private:
    std::variant<UniformPattern, TabulatedPattern, SyntheticPattern> impl_;
};

/// sqrt of the linear power gain of every element: the diagonal of G(theta, phi).
inline Eigen::VectorXd gain_amplitudes(const GainPattern& pattern, const Direction& dir) {
    const auto db = pattern.gains_db(dir);
    Eigen::VectorXd amp(static_cast<Eigen::Index>(db.size()));
    for (std::size_t m = 0; m < db.size(); ++m) amp[static_cast<Eigen::Index>(m)] = std::pow(10.0, db[m] / 20.0);
    return amp;
}

}  // namespace arraygain
