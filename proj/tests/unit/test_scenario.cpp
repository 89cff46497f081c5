#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "arraygain/scenario.hpp"
#include "support/tempdir.hpp"

using namespace arraygain;
using Catch::Approx;
using nlohmann::json;

namespace {

ScenarioConfig small_config(std::size_t trials = 200) {
    ScenarioConfig c;
    c.trials = trials;
    c.snr_sweep_db = {0.0, 10.0, 25.0};
    return c;
}

// Uniform 0 dB array at half-wavelength spacing where broadside and a 30 deg
// zenith direction are orthogonal.
ScenarioConfig orthogonal_config() {
    ScenarioConfig c;
    const double lambda = wavelength_from_frequency(2.6e9);
    c.geometry = ArrayGeometry::from_frequency(4, 8, lambda / 2, 2.6e9);
    c.array_cases = {{"flat", PatternSource::builtin("reference"), false}};
    c.good_thetas_deg = {0.0};
    c.bad_thetas_deg = {30.0};
    c.phis_deg = {90.0};
    c.snr_sweep_db = {0.0, 10.0, 20.0};
    c.trials = 10;
    return c;
}

}  // namespace

TEST_CASE("placement picks from singleton sets") {
    ScenarioConfig c;
    c.good_thetas_deg = {10.0};
    c.bad_thetas_deg = {-50.0};
    c.phis_deg = {91.0};
    auto rng = substream(1, StreamTag::Test, {});
    for (int i = 0; i < 20; ++i) {
        const auto p = place_users(c, rng);
        CHECK(p.good.theta_deg() == Approx(10.0));
        CHECK(p.bad.theta_deg() == Approx(-50.0));
        CHECK(p.good.phi_deg() == Approx(91.0));
        CHECK(p.bad.phi_deg() == Approx(91.0));
    }
}

TEST_CASE("placement stays inside the regions and is uniform") {
    const ScenarioConfig c;
    auto rng = substream(7, StreamTag::Test, {});
    std::map<long, int> good_counts;
    const int n = 30000;
    for (int i = 0; i < n; ++i) {
        const auto p = place_users(c, rng);
        const double tg = p.good.theta_deg(), tb = p.bad.theta_deg();
        REQUIRE(std::abs(tg) <= 35.0 + 1e-9);
        REQUIRE(std::abs(tb) >= 40.0 - 1e-9);
        REQUIRE(std::abs(tb) <= 75.0 + 1e-9);
        REQUIRE(p.good.phi_deg() >= 88.0 - 1e-9);
        REQUIRE(p.good.phi_deg() <= 92.0 + 1e-9);
        ++good_counts[std::lround(tg)];
    }
    REQUIRE(good_counts.size() == c.good_thetas_deg.size());
    const double expected = static_cast<double>(n) / good_counts.size();
    double chi2 = 0;
    for (const auto& [_, count] : good_counts) chi2 += (count - expected) * (count - expected) / expected;
    CHECK(chi2 < 36.12);  // 14 degrees of freedom, p = 0.001
}

TEST_CASE("config parsing") {
    SECTION("empty document gives defaults") {
        const auto c = parse_config(json::object());
        CHECK(c.geometry.rows == 4);
        CHECK(c.geometry.cols == 8);
        CHECK(c.trials == 10000);
        CHECK(c.seed == 1);
        CHECK(c.array_cases.size() == 3);
        CHECK(c.array_cases[0].single_class);
        CHECK_FALSE(c.array_cases[1].single_class);
        CHECK(c.snr_sweep_db.size() == 9);
        CHECK(c.bad_thetas_deg.size() == 16);
    }
    SECTION("explicit fields") {
        const auto c = parse_config(json::parse(R"({
            "geometry": {"rows": 2, "cols": 3, "spacing_m": 0.05, "carrier_hz": 3.5e9},
            "array_cases": [{"label": "flat", "pattern": "uniform:-3"},
                            {"label": "syn", "pattern": {"kind": "synthetic", "peak_db": 1, "seed": 9}}],
            "trials": 12, "seed": 44, "snr_sweep_db": [5],
            "mrc_interference": "desired_user_power",
            "channel": {"model": "multipath", "clusters": 3, "visibility": 0.5, "normalization": "inverse_sqrt_count"}
        })"));
        CHECK(c.geometry.size() == 6);
        CHECK(c.geometry.wavelength == Approx(kSpeedOfLight / 3.5e9));
        CHECK(c.array_cases[0].single_class);
        CHECK(c.array_cases[0].pattern.uniform_db == -3.0);
        CHECK_FALSE(c.array_cases[1].single_class);
        CHECK(c.array_cases[1].pattern.seed == 9);
        CHECK(c.trials == 12);
        CHECK(c.seed == 44);
        CHECK(c.mrc_interference == MrcInterference::DesiredUserPower);
        CHECK(c.channel.clusters == 3);
        CHECK(c.channel.normalization == ClusterNormalization::InverseSqrtCount);

        const auto again = parse_config(to_json(c));
        CHECK(to_json(again) == to_json(c));
    }
    SECTION("default round trip") {
        CHECK(to_json(parse_config(to_json(ScenarioConfig{}))) == to_json(ScenarioConfig{}));
    }
    SECTION("rejections") {
        CHECK_THROWS_AS(parse_config(json::parse(R"({"trails": 5})")), ParseError);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"geometry": {"rows": 2, "colls": 3}})")), ParseError);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"trials": "many"})")), ParseError);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"trials": 0})")), InvalidInput);
        CHECK_THROWS_AS(parse_config(json::parse(R"([1, 2])")), ParseError);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"channel": {"model": "los", "clusters": 2}})")), ParseError);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"channel": {"model": "ray"}})")), ParseError);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"mrc_interference": "both"})")), ParseError);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"good_thetas_deg": [40]})")), InvalidInput);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"bad_thetas_deg": [90]})")), InvalidInput);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"array_cases": [{"label": "a", "pattern": "builtin:horn"}]})")),
                        InvalidInput);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"array_cases": [{"label": "a", "pattern": "uniform:x"}]})")),
                        InvalidInput);
        CHECK_THROWS_AS(parse_config(json::parse(
                            R"({"array_cases": [{"label": "a", "pattern": "uniform:0"},
                                                {"label": "a", "pattern": "uniform:1"}]})")),
                        InvalidInput);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"array_cases": [{"label": "a,b", "pattern": "uniform:0"}]})")),
                        InvalidInput);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"array_cases": [{"label": "a", "pattern": {"kind": "x"}}]})")),
                        ParseError);
    }
}

TEST_CASE("config files") {
    testing::TempDir dir;
    CHECK_THROWS_AS(load_config(dir / "missing.json"), IoError);
    testing::spit(dir / "broken.json", "{\"trials\": ");
    CHECK_THROWS_AS(load_config(dir / "broken.json"), ParseError);

    testing::spit(dir / "table.json", R"({"array_cases": [{"label": "t", "pattern": "pattern.csv"}]})");
    const auto c = load_config(dir / "table.json");
    CHECK(c.array_cases[0].pattern.kind == PatternSource::Kind::Table);
    CHECK(std::filesystem::path(c.array_cases[0].pattern.name) == dir / "pattern.csv");
}

TEST_CASE("pattern source strings") {
    CHECK(parse_pattern_source("builtin:patch").describe() == "builtin:patch");
    CHECK(parse_pattern_source("uniform:-1.5").uniform_db == -1.5);
    CHECK(parse_pattern_source("table:/x/y.csv").name == "/x/y.csv");
    CHECK(parse_pattern_source("gains.csv", "/base").name == "/base/gains.csv");
    CHECK(parse_pattern_source("builtin:reference").is_uniform());
    CHECK_THROWS_AS(parse_pattern_source("table:"), InvalidInput);
    CHECK_THROWS_AS(parse_pattern_source("gains.txt"), InvalidInput);
    CHECK(resolve_pattern(parse_pattern_source("uniform:2"), 5).gain_db(4, Direction{}) == 2.0);
    CHECK_THROWS_AS(resolve_pattern(parse_pattern_source("missing.csv", "/nonexistent"), 4), IoError);
}

TEST_CASE("default scenario record layout") {
    auto c = small_config(20);
    const auto curves = run_scenario(c);
    REQUIRE(curves.records.size() == c.snr_sweep_db.size() * (2 + 4 + 4));
    const auto& first = curves.records.front();
    CHECK(first.snr_db == 0.0);
    CHECK(first.array == "reference");
    CHECK(first.detector == Detector::MRC);
    CHECK(first.user_class == UserClass::Reference);
    CHECK(curves.records[2].array == "patch");
    CHECK(curves.records[2].user_class == UserClass::Good);
    CHECK(curves.records[3].user_class == UserClass::Bad);
    CHECK_THROWS_AS(curves.at(5.0, "patch", Detector::MRC, UserClass::Good), InvalidInput);
    for (const auto& r : curves.records) {
        CHECK(std::isfinite(r.mean_rate));
        CHECK(r.mean_rate >= 0.0);
        CHECK(r.std_error >= 0.0);
        if (r.detector == Detector::MRC) CHECK(r.excluded_trials == 0);
    }
}

TEST_CASE("orthogonal users reach the interference-free rate") {
    const auto c = orthogonal_config();
    const auto curves = run_scenario(c);
    for (double snr : c.snr_sweep_db) {
        const double expected = std::log2(1 + std::pow(10.0, snr / 10.0) * 32.0);
        for (auto det : {Detector::MRC, Detector::ZF})
            for (auto cls : {UserClass::Good, UserClass::Bad}) {
                const auto& r = curves.at(snr, "flat", det, cls);
                CHECK(r.mean_rate == Approx(expected).epsilon(1e-9));
                CHECK(r.std_error < 1e-9);
            }
    }
}

TEST_CASE("identical user channels are excluded from ZF only") {
    auto c = orthogonal_config();
    // a single row makes the steering vector blind to zenith
    c.geometry = ArrayGeometry::from_frequency(1, 8, 0.05, 2.6e9);
    c.bad_thetas_deg = {50.0};
    const auto curves = run_scenario(c);
    const auto& zf = curves.at(10.0, "flat", Detector::ZF, UserClass::Good);
    CHECK(zf.excluded_trials == c.trials);
    const auto& mrc = curves.at(10.0, "flat", Detector::MRC, UserClass::Good);
    CHECK(mrc.excluded_trials == 0);
    // two identical unit-gain users: SINR = x M^2 / (x M^2 + M)
    const double x = 10.0;
    CHECK(mrc.mean_rate == Approx(std::log2(1 + x * 64 / (x * 64 + 8))).epsilon(1e-9));
}

TEST_CASE("rates grow with SNR") {
    const auto c = small_config(300);
    const auto curves = run_scenario(c);
    for (const auto& ac : c.array_cases)
        for (auto det : {Detector::MRC, Detector::ZF})
            for (auto cls : ac.single_class ? std::vector{UserClass::Reference}
                                            : std::vector{UserClass::Good, UserClass::Bad}) {
                double prev = -1.0;
                for (double snr : c.snr_sweep_db) {
                    const double r = curves.at(snr, ac.label, det, cls).mean_rate;
                    CHECK(r >= prev);
                    prev = r;
                }
            }
}

TEST_CASE("ZF beats MRC at high SNR for two-user line of sight") {
    auto c = small_config(500);
    c.snr_sweep_db = {30.0};
    const auto curves = run_scenario(c);
    CHECK(curves.at(30.0, "reference", Detector::ZF, UserClass::Reference).mean_rate >
          curves.at(30.0, "reference", Detector::MRC, UserClass::Reference).mean_rate);
}

TEST_CASE("single-class record is the mean of the two users") {
    auto split = small_config(400);
    split.array_cases = {{"flat", PatternSource::builtin("reference"), false}};
    auto merged = split;
    merged.array_cases[0].single_class = true;
    const auto a = run_scenario(split), b = run_scenario(merged);
    for (double snr : split.snr_sweep_db)
        for (auto det : {Detector::MRC, Detector::ZF}) {
            const double g = a.at(snr, "flat", det, UserClass::Good).mean_rate;
            const double bad = a.at(snr, "flat", det, UserClass::Bad).mean_rate;
            CHECK(b.at(snr, "flat", det, UserClass::Reference).mean_rate == Approx(0.5 * (g + bad)).epsilon(1e-12));
        }
}

TEST_CASE("array cases share placements") {
    auto c = small_config(100);
    const auto all = run_scenario(c);
    c.array_cases = {c.array_cases[2]};
    const auto alone = run_scenario(c);
    for (const auto& r : alone.records)
        CHECK(all.at(r.snr_db, r.array, r.detector, r.user_class).mean_rate == r.mean_rate);
}

TEST_CASE("results are independent of the thread count") {
    auto c = small_config(5000);
    c.snr_sweep_db = {25.0};
    const auto one = run_scenario(c, {1});
    const auto many = run_scenario(c, {3});
    REQUIRE(one.records.size() == many.records.size());
    for (std::size_t i = 0; i < one.records.size(); ++i) {
        CHECK(one.records[i].mean_rate == many.records[i].mean_rate);
        CHECK(one.records[i].std_error == many.records[i].std_error);
    }
}

TEST_CASE("seed changes the outcome") {
    auto c = small_config(50);
    const auto a = run_scenario(c);
    c.seed = 2;
    const auto b = run_scenario(c);
    CHECK(a.records[2].mean_rate != b.records[2].mean_rate);
}

TEST_CASE("interference weighting modes coincide for equal powers") {
    auto c = small_config(100);
    const auto a = run_scenario(c);
    c.mrc_interference = MrcInterference::DesiredUserPower;
    const auto b = run_scenario(c);
    for (std::size_t i = 0; i < a.records.size(); ++i)
        CHECK(a.records[i].mean_rate == Approx(b.records[i].mean_rate).epsilon(1e-12));
}

TEST_CASE("multipath scenario") {
    auto c = small_config(200);
    c.channel.model = ChannelModelConfig::Model::Multipath;
    c.channel.clusters = 3;
    c.channel.visibility = 0.5;
    const auto a = run_scenario(c);
    const auto b = run_scenario(c, {2});
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(std::isfinite(a.records[i].mean_rate));
        CHECK(a.records[i].mean_rate == b.records[i].mean_rate);
    }
}

TEST_CASE("unfairness summary") {
    auto c = small_config(300);
    const auto curves = run_scenario(c);
    const auto s = unfairness_vs_reference(curves, c, 25.0);
    REQUIRE(s.size() == 2);
    CHECK(s[0].array == "patch");
    const double r = curves.at(25.0, "reference", Detector::MRC, UserClass::Reference).mean_rate;
    const double g = curves.at(25.0, "patch", Detector::MRC, UserClass::Good).mean_rate;
    CHECK(s[0].good_gain_pct == Approx(100 * (g - r) / r));

    c.array_cases.erase(c.array_cases.begin());
    CHECK(unfairness_vs_reference(run_scenario(c), c, 25.0).empty());
}

TEST_CASE("uniform array treats both user classes alike") {
    auto c = small_config(2000);
    c.array_cases = {{"flat", PatternSource::builtin("reference"), false}};
    const auto curves = run_scenario(c);
    for (double snr : c.snr_sweep_db)
        for (auto det : {Detector::MRC, Detector::ZF}) {
            const auto& g = curves.at(snr, "flat", det, UserClass::Good);
            const auto& b = curves.at(snr, "flat", det, UserClass::Bad);
            CHECK(std::abs(g.mean_rate - b.mean_rate) <= 3 * std::hypot(g.std_error, b.std_error) + 1e-12);
        }
}

TEST_CASE("gain variation never helps ZF on average") {
    auto c = small_config(2000);
    c.snr_sweep_db = {10.0, 25.0};
    const auto curves = run_scenario(c);
    for (double snr : c.snr_sweep_db) {
        const auto& ref = curves.at(snr, "reference", Detector::ZF, UserClass::Reference);
        for (const char* label : {"patch", "dipole"})
            for (auto cls : {UserClass::Good, UserClass::Bad}) {
                const auto& r = curves.at(snr, label, Detector::ZF, cls);
                CHECK(r.mean_rate <= ref.mean_rate + 3 * std::hypot(r.std_error, ref.std_error));
            }
    }
}

TEST_CASE("shipped configs load") {
    for (const auto& entry : std::filesystem::directory_iterator(ARRAYGAIN_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        INFO(entry.path().string());
        auto c = load_config(entry.path());
        for (const auto& ac : c.array_cases) CHECK_NOTHROW(resolve_pattern(ac.pattern, c.geometry.size()));
        c.trials = 5;
        CHECK_FALSE(run_scenario(c).records.empty());
    }
}
