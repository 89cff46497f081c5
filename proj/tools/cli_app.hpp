#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arraygain/arraygain.hpp"

namespace arraygain::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kNumerical = 2, kIo = 3 };

namespace detail {

inline std::vector<BudgetItem> parse_extras(const std::vector<std::string>& extras) {
    std::vector<BudgetItem> out;
    for (const auto& e : extras) {
        const auto eq = e.find('=');
        if (eq == std::string::npos || eq == 0) throw InvalidInput("--extra expects name=db, got '" + e + "'");
        const std::string value = e.substr(eq + 1);
        try {
            std::size_t used = 0;
            const double db = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
            out.push_back({e.substr(0, eq), db});
        } catch (const std::logic_error&) {
            throw InvalidInput("--extra expects a numeric dB value, got '" + e + "'");
        }
    }
    return out;
}

inline std::string fixed(double v, int prec) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(prec) << v;
    return s.str();
}

}  // namespace detail

/// Runs the command line. Output goes to `out`, diagnostics to `err`; the
/// return value is the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Massive MIMO link simulator with per-element embedded antenna gains", "arraygain"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    // simulate
    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::size_t threads = 0;
    auto* simulate = app.add_subcommand("simulate", "Run the good-user/bad-user rate experiment");
    simulate->add_option("--config", config_path, "Scenario JSON")->required();
    simulate->add_option("--seed", seed, "Override the master seed");
    simulate->add_option("--trials", trials, "Override the trial count");
    simulate->add_option("--out", out_dir, "Output directory")->required();
    simulate->add_option("--threads", threads, "Worker threads (0 = all cores)");

    // gain-stats
    std::string pattern_spec, geometry_text = "4x8", stats_out;
    double stats_spacing = 0.071, stats_freq = 2.6e9;
    auto* stats = app.add_subcommand("gain-stats", "Gain-variation statistics of one array pattern");
    stats->add_option("--pattern", pattern_spec, "<csv path>|builtin:patch|builtin:dipole|builtin:reference")
        ->required();
    stats->add_option("--geometry", geometry_text, "Grid shape RxC")->capture_default_str();
    stats->add_option("--spacing-m", stats_spacing, "Element spacing in meters")->capture_default_str();
    stats->add_option("--freq-hz", stats_freq, "Carrier frequency")->capture_default_str();
    stats->add_option("--out", stats_out, "Output directory")->required();

    // link-budget
    double tx_dbm = 0, tx_gain = 0, rx_gain = 0, distance = 0, freq = 0;
    std::vector<std::string> extras;
    std::string budget_csv;
    auto* budget = app.add_subcommand("link-budget", "Friis link budget breakdown");
    budget->add_option("--tx-dbm", tx_dbm, "Transmit power (dBm)")->required();
    budget->add_option("--tx-gain-dbi", tx_gain, "Transmit antenna gain (dBi)")->required();
    budget->add_option("--rx-gain-dbi", rx_gain, "Embedded receive gain (dBi)")->required();
    budget->add_option("--distance-m", distance, "Link distance (m)")->required();
    budget->add_option("--freq-hz", freq, "Carrier frequency (Hz)")->required();
    budget->add_option("--extra", extras, "Additional item name=db (repeatable)");
    budget->add_option("--csv", budget_csv, "Also write the breakdown as CSV");

    // steering
    std::string steer_geometry;
    double steer_spacing = 0, steer_freq = 0, theta_deg = 0, phi_deg = 0;
    auto* steering = app.add_subcommand("steering", "Dump a steering vector");
    steering->add_option("--geometry", steer_geometry, "Grid shape RxC")->required();
    steering->add_option("--spacing-m", steer_spacing, "Element spacing in meters")->required();
    steering->add_option("--freq-hz", steer_freq, "Carrier frequency")->required();
    steering->add_option("--theta-deg", theta_deg, "Zenith angle")->required();
    steering->add_option("--phi-deg", phi_deg, "Azimuth angle")->required();

    std::vector<const char*> argv{"arraygain"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kInvalid;
    }

    try {
        if (*simulate) {
            auto config = load_config(config_path);
            if (seed) config.seed = *seed;
            if (trials) config.trials = *trials;
            config.validate();
            const auto curves = run_scenario(config, {threads});
            const auto files = emit_results(curves, config, out_dir);
            out << "wrote " << curves.records.size() << " records to " << files.rates_csv.string() << '\n';
            const auto& sweep = config.snr_sweep_db;
            const double mid = std::find(sweep.begin(), sweep.end(), 25.0) != sweep.end() ? 25.0 : sweep[sweep.size() / 2];
            for (const auto& s : unfairness_vs_reference(curves, config, mid))
                out << s.array << " @ " << format_number(mid) << " dB: MRC good-user gain "
                    << detail::fixed(s.good_gain_pct, 1) << "%, bad-user loss " << detail::fixed(s.bad_loss_pct, 1)
                    << "%\n";
        } else if (*stats) {
            const auto [rows, cols] = parse_grid_shape(geometry_text);
            const auto geom = ArrayGeometry::from_frequency(rows, cols, stats_spacing, stats_freq);
            const auto source = parse_pattern_source(pattern_spec);
            const auto pattern = resolve_pattern(source, geom.size());
            GainStatsOptions opts;
            if (const auto* table = pattern.as_tabulated()) {
                opts.theta_grid_deg = table->theta_grid();
                opts.phi_grid_deg = table->phi_grid();
                const auto& pg = table->phi_grid();
                if (opts.panel_phi_deg < pg.front() || opts.panel_phi_deg > pg.back()) opts.panel_phi_deg = pg.front();
                std::erase_if(opts.panel_thetas_deg,
                              [&](double t) { return !table->contains(t, opts.panel_phi_deg); });
            } else {
                opts.phi_grid_deg = ScenarioConfig{}.phis_deg;
            }
            const auto files = gain_stats_report(pattern, geom, opts, stats_out);
            out << "wrote " << files.variation.string() << ", " << files.dynamic_range.string() << ", "
                << files.panel_map.string() << '\n';
        } else if (*budget) {
            LinkBudget b{tx_dbm, tx_gain, rx_gain, distance, wavelength_from_frequency(freq),
                         detail::parse_extras(extras)};
            const auto table = budget_breakdown(b);
            out << std::left << std::setw(24) << "item" << std::right << std::setw(12) << "dB" << std::setw(14)
                << "total (dBm)" << '\n';
            for (const auto& row : table.items)
                out << std::left << std::setw(24) << row.name << std::right << std::setw(12)
                    << detail::fixed(row.contribution_db, 2) << std::setw(14) << detail::fixed(row.running_total, 2)
                    << '\n';
            out << std::left << std::setw(24) << "Received level" << std::right << std::setw(12) << "" << std::setw(14)
                << detail::fixed(table.received_dbm, 2) << '\n';
            if (!budget_csv.empty()) {
                std::ofstream csv(budget_csv, std::ios::binary);
                if (!csv) throw IoError("cannot open output file", budget_csv);
                csv << "item,db,running_total_dbm\n";
                for (const auto& row : table.items)
                    csv << row.name << ',' << format_number(row.contribution_db) << ','
                        << format_number(row.running_total) << '\n';
                csv << "Received level,," << format_number(table.received_dbm) << '\n';
                if (!csv) throw IoError("write failed", budget_csv);
            }
        } else if (*steering) {
            const auto [rows, cols] = parse_grid_shape(steer_geometry);
            const auto geom = ArrayGeometry::from_frequency(rows, cols, steer_spacing, steer_freq);
            const auto dir = Direction::from_degrees(theta_deg, phi_deg);
            const auto a = steering_vector(geom, dir);
            const auto pos = element_positions(geom);
            out << "element,row,col,x_m,y_m,re,im,phase_rad\n";
            for (std::size_t m = 0; m < geom.size(); ++m) {
                const auto v = a[static_cast<Eigen::Index>(m)];
                out << m << ',' << m % rows << ',' << m / rows << ',' << format_number(pos[m].x) << ','
                    << format_number(pos[m].y) << ',' << format_number(v.real()) << ',' << format_number(v.imag())
                    << ',' << format_number(std::arg(v)) << '\n';
            }
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const DegenerateChannel& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    }
    return kOk;
}

}  // namespace arraygain::cli
