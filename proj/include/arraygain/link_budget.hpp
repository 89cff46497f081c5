#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "arraygain/errors.hpp"
#include "arraygain/geometry.hpp"

namespace arraygain {

struct FreeSpaceFactor {
    double linear = 0.0;  // r = (lambda / (4 pi d))^2
    double db = 0.0;
};

inline FreeSpaceFactor free_space_factor(double distance_m, double wavelength_m) {
    detail::require(std::isfinite(distance_m) && distance_m > 0.0, "distance must be positive");
    detail::require(std::isfinite(wavelength_m) && wavelength_m > 0.0, "wavelength must be positive");
    const double ratio = wavelength_m / (4.0 * kPi * distance_m);
    return {ratio * ratio, 20.0 * std::log10(ratio)};
}

struct BudgetItem {
    std::string name;
    double db = 0.0;
};

/// One transmitter-to-element link. Extra items (cable loss, receiver gain, ...)
/// are added in dB in declaration order.
struct LinkBudget {
    double tx_power_dbm = 0.0;
    double tx_gain_dbi = 0.0;
    double rx_gain_dbi = 0.0;
    double distance_m = 1.0;
    double wavelength_m = 1.0;
    std::vector<BudgetItem> extra_items;

    void validate() const {
        detail::require(std::isfinite(tx_power_dbm) && std::isfinite(tx_gain_dbi) && std::isfinite(rx_gain_dbi),
                        "link budget levels must be finite");
        detail::require(std::isfinite(distance_m) && distance_m > 0.0, "distance must be positive");
        detail::require(std::isfinite(wavelength_m) && wavelength_m > 0.0, "wavelength must be positive");
        for (const auto& e : extra_items)
            detail::require(std::isfinite(e.db), "budget item '" + e.name + "' must be finite");
    }
};

inline double friis_received_power(const LinkBudget& b) {
    b.validate();
    double total = b.tx_power_dbm + b.tx_gain_dbi + b.rx_gain_dbi + free_space_factor(b.distance_m, b.wavelength_m).db;
    for (const auto& e : b.extra_items) total += e.db;
    return total;
}

/// Same received power computed in linear units (mW), for cross-checking the dB path.
inline double friis_received_power_linear_mw(const LinkBudget& b) {
    b.validate();
    const auto lin = [](double db) { return std::pow(10.0, db / 10.0); };
    double p = lin(b.tx_power_dbm) * lin(b.tx_gain_dbi) * free_space_factor(b.distance_m, b.wavelength_m).linear *
               lin(b.rx_gain_dbi);
    for (const auto& e : b.extra_items) p *= lin(e.db);
    return p;
}

struct BreakdownRow {
    std::string name;
    double contribution_db = 0.0;
    double running_total = 0.0;  // dBm after this item
};

struct BudgetBreakdown {
    std::vector<BreakdownRow> items;
    double received_dbm = 0.0;

    // Items plus the closing received-level line.
    std::size_t rendered_rows() const { return items.size() + 1; }
};

inline BudgetBreakdown budget_breakdown(const LinkBudget& b) {
    b.validate();
    std::vector<std::pair<std::string, double>> entries{
        {"TX power", b.tx_power_dbm},
        {"TX antenna gain", b.tx_gain_dbi},
        {"RX embedded gain", b.rx_gain_dbi},
        {"Free space path loss", free_space_factor(b.distance_m, b.wavelength_m).db},
    };
    for (const auto& e : b.extra_items) entries.emplace_back(e.name, e.db);

    BudgetBreakdown out;
    double total = 0.0;
    for (auto& [name, db] : entries) {
        total += db;
        out.items.push_back({std::move(name), db, total});
    }
    out.received_dbm = total;
    return out;
}

}  // namespace arraygain
