#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "arraygain/channel.hpp"
#include "arraygain/detectors.hpp"
#include "arraygain/errors.hpp"
#include "arraygain/gain_pattern.hpp"
#include "arraygain/geometry.hpp"
#include "arraygain/parallel.hpp"
#include "arraygain/rng.hpp"

namespace arraygain {

/// Where an array case gets its element gains from.
struct PatternSource {
    enum class Kind { Builtin, Uniform, Table, Synthetic };

    Kind kind = Kind::Builtin;
    std::string name = "reference";  // builtin name or table path
    double uniform_db = 0.0;
    SyntheticParams synthetic;
    std::uint64_t seed = 0;

    static PatternSource builtin(std::string n) { return {Kind::Builtin, std::move(n)}; }

    bool is_uniform() const { return kind == Kind::Uniform || (kind == Kind::Builtin && name == "reference"); }

    /// "builtin:patch", "uniform:-3", "table:<path>" or "synthetic".
    std::string describe() const {
        switch (kind) {
            case Kind::Builtin: return "builtin:" + name;
            case Kind::Uniform: {
                nlohmann::json j = uniform_db;
                return "uniform:" + j.dump();
            }
            case Kind::Table: return "table:" + name;
            case Kind::Synthetic: return "synthetic";
        }
        return {};
    }
};

/// Parses the string form of a pattern source. Relative table paths resolve
/// against base_dir.
inline PatternSource parse_pattern_source(const std::string& text, const std::filesystem::path& base_dir = {}) {
    const auto colon = text.find(':');
    const std::string scheme = colon == std::string::npos ? text : text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? std::string{} : text.substr(colon + 1);
    if (scheme == "builtin") {
        if (rest != "reference" && rest != "patch" && rest != "dipole")
            throw InvalidInput("unknown builtin pattern '" + rest + "' (expected reference, patch or dipole)");
        return PatternSource::builtin(rest);
    }
    if (scheme == "uniform") {
        PatternSource s{PatternSource::Kind::Uniform};
        try {
            std::size_t used = 0;
            s.uniform_db = std::stod(rest, &used);
            if (used != rest.size()) throw std::invalid_argument(rest);
        } catch (const std::logic_error&) {
            throw InvalidInput("uniform pattern needs a numeric dB value, got '" + rest + "'");
        }
        return s;
    }
    if (scheme == "table" || (colon == std::string::npos && text.ends_with(".csv"))) {
        std::filesystem::path p = scheme == "table" ? rest : text;
        if (p.empty()) throw InvalidInput("table pattern needs a path");
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        PatternSource s{PatternSource::Kind::Table};
        s.name = p.string();
        return s;
    }
    throw InvalidInput("unrecognized pattern source '" + text + "'");
}

inline GainPattern resolve_pattern(const PatternSource& source, std::size_t element_count) {
    switch (source.kind) {
        case PatternSource::Kind::Builtin:
            if (source.name == "reference") return GainPattern::uniform(element_count, 0.0);
            if (source.name == "patch") return synthesize_pattern(patch_params(), kPatchPatternSeed, element_count);
            if (source.name == "dipole") return synthesize_pattern(dipole_params(), kDipolePatternSeed, element_count);
            throw InvalidInput("unknown builtin pattern '" + source.name + "'");
        case PatternSource::Kind::Uniform: return GainPattern::uniform(element_count, source.uniform_db);
        case PatternSource::Kind::Table: return load_pattern_file(source.name, element_count);
        case PatternSource::Kind::Synthetic: return synthesize_pattern(source.synthetic, source.seed, element_count);
    }
    throw InvalidInput("invalid pattern source");
}

struct ArrayCase {
    std::string label;
    PatternSource pattern;
    // Report one "reference" class (mean of both users) instead of good/bad.
    bool single_class = false;
};

struct ChannelModelConfig {
    enum class Model { LineOfSight, Multipath };
    Model model = Model::LineOfSight;
    std::size_t clusters = 1;
    double visibility = 1.0;  // Bernoulli probability per element and extra cluster
    ClusterNormalization normalization = ClusterNormalization::InverseCount;
};

namespace detail {

inline std::vector<double> arange(double start, double stop, double step) {
    std::vector<double> out;
    for (int i = 0;; ++i) {
        const double v = start + i * step;
        if (v > stop + 1e-9) break;
        out.push_back(v);
    }
    return out;
}

}  // namespace detail

struct ScenarioConfig {
    ArrayGeometry geometry = ArrayGeometry::from_frequency(4, 8, 0.071, 2.6e9);
    double carrier_hz = 2.6e9;
    std::vector<ArrayCase> array_cases{
        {"reference", PatternSource::builtin("reference"), true},
        {"patch", PatternSource::builtin("patch"), false},
        {"dipole", PatternSource::builtin("dipole"), false},
    };
    std::vector<double> good_thetas_deg = detail::arange(-35.0, 35.0, 5.0);
    std::vector<double> bad_thetas_deg = [] {
        auto v = detail::arange(-75.0, -40.0, 5.0);
        const auto pos = detail::arange(40.0, 75.0, 5.0);
        v.insert(v.end(), pos.begin(), pos.end());
        return v;
    }();
    std::vector<double> phis_deg = detail::arange(88.0, 92.0, 1.0);
    std::vector<double> snr_sweep_db = detail::arange(0.0, 40.0, 5.0);
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    MrcInterference mrc_interference = MrcInterference::PerInterferer;
    ChannelModelConfig channel;

    void validate() const {
        geometry.validate();
        detail::require(!array_cases.empty(), "scenario needs at least one array case");
        std::set<std::string> labels;
        for (const auto& c : array_cases) {
            detail::require(!c.label.empty(), "array case labels must be nonempty");
            detail::require(c.label.find_first_of(",\"\n\r") == std::string::npos,
                            "array case label '" + c.label + "' contains CSV-reserved characters");
            detail::require(labels.insert(c.label).second, "duplicate array case label '" + c.label + "'");
        }
        detail::require(!good_thetas_deg.empty() && !bad_thetas_deg.empty() && !phis_deg.empty(),
                        "angle sets must be nonempty");
        for (const auto* set : {&good_thetas_deg, &bad_thetas_deg})
            for (double t : *set)
                detail::require(std::isfinite(t) && std::abs(t) < 90.0, "zenith angles must lie in (-90, 90) deg");
        for (double p : phis_deg) detail::require(std::isfinite(p), "azimuth angles must be finite");
        for (double g : good_thetas_deg)
            detail::require(std::find(bad_thetas_deg.begin(), bad_thetas_deg.end(), g) == bad_thetas_deg.end(),
                            "good and bad zenith sets must be disjoint");
        detail::require(!snr_sweep_db.empty(), "SNR sweep must be nonempty");
        for (double s : snr_sweep_db) detail::require(std::isfinite(s), "SNR values must be finite");
        detail::require(trials >= 1, "trials must be at least 1");
        detail::require(channel.clusters >= 1, "cluster count must be at least 1");
        detail::require(channel.visibility > 0.0 && channel.visibility <= 1.0,
                        "cluster visibility probability must lie in (0, 1]");
    }
};

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + " must be a JSON object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ParseError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
T get_as(const json& j, const std::string& what) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ParseError("invalid value for " + what + ": " + j.dump());
    }
}

inline std::vector<std::pair<double, double>> parse_knots(const json& j, const std::string& what) {
    std::vector<std::pair<double, double>> knots;
    if (!j.is_array()) throw ParseError(what + " must be an array of [theta_deg, db] pairs");
    for (const auto& k : j) {
        if (!k.is_array() || k.size() != 2) throw ParseError(what + " must be an array of [theta_deg, db] pairs");
        knots.emplace_back(get_as<double>(k[0], what), get_as<double>(k[1], what));
    }
    return knots;
}

inline json knots_to_json(const PiecewiseLinear& curve) {
    json arr = json::array();
    for (const auto& [x, y] : curve.knots()) arr.push_back({x, y});
    return arr;
}

inline PatternSource parse_pattern_json(const json& j, const std::filesystem::path& base_dir) {
    if (j.is_string()) return parse_pattern_source(j.get<std::string>(), base_dir);
    reject_unknown_keys(j, {"kind", "peak_db", "envelope", "spread", "kappa", "seed"}, "synthetic pattern");
    if (j.value("kind", std::string{}) != "synthetic")
        throw ParseError("pattern object must have \"kind\": \"synthetic\"");
    PatternSource s{PatternSource::Kind::Synthetic};
    s.synthetic = patch_params();
    if (j.contains("peak_db")) s.synthetic.peak_db = get_as<double>(j["peak_db"], "peak_db");
    if (j.contains("envelope")) s.synthetic.envelope = PiecewiseLinear(parse_knots(j["envelope"], "envelope"));
    if (j.contains("spread")) s.synthetic.spread = PiecewiseLinear(parse_knots(j["spread"], "spread"));
    if (j.contains("kappa")) s.synthetic.kappa = get_as<double>(j["kappa"], "kappa");
    if (j.contains("seed")) s.seed = get_as<std::uint64_t>(j["seed"], "seed");
    s.synthetic.validate();
    return s;
}

inline json pattern_to_json(const PatternSource& s) {
    if (s.kind != PatternSource::Kind::Synthetic) return s.describe();
    return {{"kind", "synthetic"},
            {"peak_db", s.synthetic.peak_db},
            {"envelope", knots_to_json(s.synthetic.envelope)},
            {"spread", knots_to_json(s.synthetic.spread)},
            {"kappa", s.synthetic.kappa},
            {"seed", s.seed}};
}

}  // namespace detail

/// Reads a scenario document. Every field is optional and falls back to the
/// defaults; unknown keys are rejected.
inline ScenarioConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
    using detail::get_as;
    detail::reject_unknown_keys(j,
                                {"geometry", "array_cases", "good_thetas_deg", "bad_thetas_deg", "phis_deg",
                                 "snr_sweep_db", "trials", "seed", "mrc_interference", "channel"},
                                "scenario config");
    ScenarioConfig c;
    if (j.contains("geometry")) {
        const auto& g = j["geometry"];
        detail::reject_unknown_keys(g, {"rows", "cols", "spacing_m", "carrier_hz"}, "geometry");
        const auto rows = g.contains("rows") ? get_as<std::size_t>(g["rows"], "rows") : c.geometry.rows;
        const auto cols = g.contains("cols") ? get_as<std::size_t>(g["cols"], "cols") : c.geometry.cols;
        const auto spacing = g.contains("spacing_m") ? get_as<double>(g["spacing_m"], "spacing_m") : c.geometry.spacing;
        c.carrier_hz = g.contains("carrier_hz") ? get_as<double>(g["carrier_hz"], "carrier_hz") : c.carrier_hz;
        c.geometry = ArrayGeometry::from_frequency(rows, cols, spacing, c.carrier_hz);
    }
    if (j.contains("array_cases")) {
        const auto& arr = j["array_cases"];
        if (!arr.is_array()) throw ParseError("array_cases must be an array");
        c.array_cases.clear();
        for (const auto& a : arr) {
            detail::reject_unknown_keys(a, {"label", "pattern", "single_class"}, "array case");
            if (!a.contains("label") || !a.contains("pattern"))
                throw ParseError("array case needs \"label\" and \"pattern\"");
            ArrayCase ac;
            ac.label = get_as<std::string>(a["label"], "label");
            ac.pattern = detail::parse_pattern_json(a["pattern"], base_dir);
            ac.single_class = a.contains("single_class") ? get_as<bool>(a["single_class"], "single_class")
                                                         : ac.pattern.is_uniform();
            c.array_cases.push_back(std::move(ac));
        }
    }
    const auto list = [&](const char* key, std::vector<double>& dst) {
        if (j.contains(key)) dst = get_as<std::vector<double>>(j[key], key);
    };
    list("good_thetas_deg", c.good_thetas_deg);
    list("bad_thetas_deg", c.bad_thetas_deg);
    list("phis_deg", c.phis_deg);
    list("snr_sweep_db", c.snr_sweep_db);
    if (j.contains("trials")) c.trials = get_as<std::size_t>(j["trials"], "trials");
    if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j["seed"], "seed");
    if (j.contains("mrc_interference")) {
        const auto m = get_as<std::string>(j["mrc_interference"], "mrc_interference");
        if (m == "per_interferer") c.mrc_interference = MrcInterference::PerInterferer;
        else if (m == "desired_user_power") c.mrc_interference = MrcInterference::DesiredUserPower;
        else throw ParseError("mrc_interference must be per_interferer or desired_user_power");
    }
    if (j.contains("channel")) {
        const auto& ch = j["channel"];
        detail::reject_unknown_keys(ch, {"model", "clusters", "visibility", "normalization"}, "channel");
        const auto model = ch.value("model", std::string{"los"});
        if (model == "los") c.channel.model = ChannelModelConfig::Model::LineOfSight;
        else if (model == "multipath") c.channel.model = ChannelModelConfig::Model::Multipath;
        else throw ParseError("channel model must be los or multipath");
        if (ch.contains("clusters")) c.channel.clusters = get_as<std::size_t>(ch["clusters"], "clusters");
        if (ch.contains("visibility")) c.channel.visibility = get_as<double>(ch["visibility"], "visibility");
        if (ch.contains("normalization")) {
            const auto n = get_as<std::string>(ch["normalization"], "normalization");
            if (n == "inverse_count") c.channel.normalization = ClusterNormalization::InverseCount;
            else if (n == "inverse_sqrt_count") c.channel.normalization = ClusterNormalization::InverseSqrtCount;
            else throw ParseError("channel normalization must be inverse_count or inverse_sqrt_count");
        }
        if (c.channel.model == ChannelModelConfig::Model::LineOfSight && c.channel.clusters != 1)
            throw ParseError("the los channel model has exactly one cluster");
    }
    c.validate();
    return c;
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario config", path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("scenario config is not valid JSON: ") + e.what());
    }
    return parse_config(j, path.parent_path());
}

/// Canonical JSON echo of a config; parse_config(to_json(c)) reproduces c.
inline nlohmann::json to_json(const ScenarioConfig& c) {
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& a : c.array_cases)
        cases.push_back({{"label", a.label}, {"pattern", detail::pattern_to_json(a.pattern)},
                         {"single_class", a.single_class}});
    nlohmann::json channel = {{"model", c.channel.model == ChannelModelConfig::Model::LineOfSight ? "los" : "multipath"}};
    if (c.channel.model == ChannelModelConfig::Model::Multipath) {
        channel["clusters"] = c.channel.clusters;
        channel["visibility"] = c.channel.visibility;
        channel["normalization"] =
            c.channel.normalization == ClusterNormalization::InverseCount ? "inverse_count" : "inverse_sqrt_count";
    }
    return {{"geometry",
             {{"rows", c.geometry.rows}, {"cols", c.geometry.cols}, {"spacing_m", c.geometry.spacing},
              {"carrier_hz", c.carrier_hz}}},
            {"array_cases", cases},
            {"good_thetas_deg", c.good_thetas_deg},
            {"bad_thetas_deg", c.bad_thetas_deg},
            {"phis_deg", c.phis_deg},
            {"snr_sweep_db", c.snr_sweep_db},
            {"trials", c.trials},
            {"seed", c.seed},
            {"mrc_interference",
             c.mrc_interference == MrcInterference::PerInterferer ? "per_interferer" : "desired_user_power"},
            {"channel", channel}};
}

struct UserPlacement {
    Direction good;
    Direction bad;
};

/// One user uniformly from the good zenith set, one from the bad set, each
/// with an azimuth drawn uniformly from the phi set.
template <class Rng>
UserPlacement place_users(const ScenarioConfig& config, Rng& rng) {
    const auto pick = [&](const std::vector<double>& set) {
        detail::require(!set.empty(), "cannot place a user from an empty angle set");
        std::uniform_int_distribution<std::size_t> idx(0, set.size() - 1);
        return set[idx(rng)];
    };
    const double tg = pick(config.good_thetas_deg);
    const double pg = pick(config.phis_deg);
    const double tb = pick(config.bad_thetas_deg);
    const double pb = pick(config.phis_deg);
    return {Direction::from_degrees(tg, pg), Direction::from_degrees(tb, pb)};
}

enum class Detector { MRC, ZF };
enum class UserClass { Good, Bad, Reference };

inline const char* to_string(Detector d) { return d == Detector::MRC ? "MRC" : "ZF"; }
inline const char* to_string(UserClass u) {
    switch (u) {
        case UserClass::Good: return "good";
        case UserClass::Bad: return "bad";
        case UserClass::Reference: return "reference";
    }
    return "";
}

struct RateRecord {
    double snr_db = 0.0;
    std::string array;
    Detector detector = Detector::MRC;
    UserClass user_class = UserClass::Good;
    double mean_rate = 0.0;  // bits/s/Hz
    double std_error = 0.0;
    std::size_t excluded_trials = 0;
};

struct RateCurves {
    std::vector<RateRecord> records;

    const RateRecord* find(double snr_db, const std::string& array, Detector det, UserClass cls) const {
        for (const auto& r : records)
            if (r.snr_db == snr_db && r.array == array && r.detector == det && r.user_class == cls) return &r;
        return nullptr;
    }

    const RateRecord& at(double snr_db, const std::string& array, Detector det, UserClass cls) const {
        if (const auto* r = find(snr_db, array, det, cls)) return *r;
        throw InvalidInput("no rate record for array '" + array + "' at " + std::to_string(snr_db) + " dB");
    }
};

struct RunOptions {
    std::size_t threads = 1;
};

namespace detail {

// User specs of one trial: LoS single cluster, or a multipath set whose first
// cluster is the user's own direction.
inline std::vector<UserSpec> trial_users(const ScenarioConfig& config, const UserPlacement& place, std::uint64_t trial) {
    const std::size_t m = config.geometry.size();
    const std::array<Direction, 2> dirs{place.good, place.bad};
    std::vector<UserSpec> users;
    for (std::size_t k = 0; k < 2; ++k) {
        UserSpec u = UserSpec::line_of_sight(dirs[k], m);
        if (config.channel.model == ChannelModelConfig::Model::Multipath) {
            auto angle_rng = substream(config.seed, StreamTag::ClusterAngles, {trial, k});
            const auto& thetas = k == 0 ? config.good_thetas_deg : config.bad_thetas_deg;
            std::uniform_int_distribution<std::size_t> ti(0, thetas.size() - 1);
            std::uniform_int_distribution<std::size_t> pi(0, config.phis_deg.size() - 1);
            for (std::size_t c = 1; c < config.channel.clusters; ++c) {
                auto vis_rng = substream(config.seed, StreamTag::Visibility, {trial, k, c});
                const double t = thetas[ti(angle_rng)];
                const double p = config.phis_deg[pi(angle_rng)];
                u.clusters.push_back({Direction::from_degrees(t, p),
                                      bernoulli_visibility(m, config.channel.visibility, vis_rng)});
            }
        }
        users.push_back(std::move(u));
    }
    return users;
}

}  // namespace detail

/// Good-user/bad-user experiment. Every trial places one user in each region
/// and evaluates all array cases and SNR points on the same placement, so the
/// cases are compared on common random numbers. Results do not depend on the
/// thread count.
inline RateCurves run_scenario(const ScenarioConfig& config, const RunOptions& options = {}) {
    config.validate();
    const std::size_t m = config.geometry.size();
    std::vector<GainPattern> patterns;
    for (const auto& c : config.array_cases) patterns.push_back(resolve_pattern(c.pattern, m));

    const std::size_t n_case = patterns.size();
    const std::size_t n_snr = config.snr_sweep_db.size();
    std::vector<std::vector<double>> powers(n_snr);
    for (std::size_t s = 0; s < n_snr; ++s) {
        const double x = std::pow(10.0, config.snr_sweep_db[s] / 10.0);
        powers[s] = {x, x};
    }
    DetectorOptions det;
    det.mrc_interference = config.mrc_interference;

    // stats[case][snr][detector][slot], slot 0 good, 1 bad, 2 per-trial mean of both
    std::vector<RunningStats> stats(n_case * n_snr * 2 * 3);
    const auto slot = [&](std::size_t c, std::size_t s, std::size_t d, std::size_t u) -> RunningStats& {
        return stats[((c * n_snr + s) * 2 + d) * 3 + u];
    };
    std::vector<std::size_t> excluded(n_case, 0);

    struct TrialResult {
        std::vector<double> rates;  // [case][snr][detector][user]
        std::vector<std::uint8_t> zf_degenerate;  // [case]
    };

    constexpr std::size_t kBlock = 4096;
    std::vector<TrialResult> block;
    for (std::size_t start = 0; start < config.trials; start += kBlock) {
        const std::size_t count = std::min(kBlock, config.trials - start);
        block.assign(count, {});
        parallel_for(count, options.threads, [&](std::size_t i) {
            const std::uint64_t trial = start + i;
            auto rng = substream(config.seed, StreamTag::Placement, {trial});
            const auto users = detail::trial_users(config, place_users(config, rng), trial);
            TrialResult& out = block[i];
            out.rates.assign(n_case * n_snr * 2 * 2, 0.0);
            out.zf_degenerate.assign(n_case, 0);
            for (std::size_t c = 0; c < n_case; ++c) {
                const ChannelMatrix d = config.channel.model == ChannelModelConfig::Model::LineOfSight
                                            ? los_channel(config.geometry, patterns[c], users)
                                            : multipath_channel(config.geometry, patterns[c], users, config.seed,
                                                                trial, {config.channel.normalization, false});
                for (std::size_t s = 0; s < n_snr; ++s) {
                    const RateSample r = instantaneous_rates(d, powers[s], det);
                    double* dst = &out.rates[((c * n_snr + s) * 2) * 2];
                    dst[0] = r.mrc_rate[0];
                    dst[1] = r.mrc_rate[1];
                    if (r.zf_degenerate) {
                        out.zf_degenerate[c] = 1;
                    } else {
                        dst[2] = r.zf_rate[0];
                        dst[3] = r.zf_rate[1];
                    }
                }
            }
        });
        for (const auto& t : block) {
            for (std::size_t c = 0; c < n_case; ++c) {
                if (t.zf_degenerate[c]) ++excluded[c];
                for (std::size_t s = 0; s < n_snr; ++s)
                    for (std::size_t d = 0; d < 2; ++d) {
                        if (d == 1 && t.zf_degenerate[c]) continue;
                        const double* r = &t.rates[((c * n_snr + s) * 2 + d) * 2];
                        slot(c, s, d, 0).add(r[0]);
                        slot(c, s, d, 1).add(r[1]);
                        slot(c, s, d, 2).add(0.5 * (r[0] + r[1]));
                    }
            }
        }
    }

    RateCurves curves;
    for (std::size_t s = 0; s < n_snr; ++s)
        for (std::size_t c = 0; c < n_case; ++c)
            for (std::size_t d = 0; d < 2; ++d) {
                const auto detector = d == 0 ? Detector::MRC : Detector::ZF;
                const std::size_t excl = d == 0 ? 0 : excluded[c];
                const auto emit = [&](UserClass cls, const RunningStats& st) {
                    curves.records.push_back({config.snr_sweep_db[s], config.array_cases[c].label, detector, cls,
                                              st.mean(), st.standard_error(), excl});
                };
                if (config.array_cases[c].single_class) {
                    emit(UserClass::Reference, slot(c, s, d, 2));
                } else {
                    emit(UserClass::Good, slot(c, s, d, 0));
                    emit(UserClass::Bad, slot(c, s, d, 1));
                }
            }
    return curves;
}

/// MRC good-user gain and bad-user loss relative to a single-class reference
/// case, in percent of the reference rate.
struct UnfairnessSummary {
    std::string array;
    double good_gain_pct = 0.0;
    double bad_loss_pct = 0.0;
};

inline std::vector<UnfairnessSummary> unfairness_vs_reference(const RateCurves& curves, const ScenarioConfig& config,
                                                               double snr_db) {
    const ArrayCase* ref = nullptr;
    for (const auto& c : config.array_cases)
        if (c.single_class) {
            ref = &c;
            break;
        }
    std::vector<UnfairnessSummary> out;
    if (!ref) return out;
    const double r = curves.at(snr_db, ref->label, Detector::MRC, UserClass::Reference).mean_rate;
    for (const auto& c : config.array_cases) {
        if (c.single_class) continue;
        const double g = curves.at(snr_db, c.label, Detector::MRC, UserClass::Good).mean_rate;
        const double b = curves.at(snr_db, c.label, Detector::MRC, UserClass::Bad).mean_rate;
        out.push_back({c.label, 100.0 * (g - r) / r, 100.0 * (r - b) / r});
    }
    return out;
}

}  // namespace arraygain
