#include <catch_amalgamated.hpp>

#include <sstream>

#include "cli_app.hpp"
#include "support/tempdir.hpp"

using namespace arraygain;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("argument errors exit with 1") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"link-budget", "--tx-dbm", "20"}).code == 1);
    CHECK(run({"steering", "--geometry", "4x8", "--spacing-m", "x", "--freq-hz", "1e9", "--theta-deg", "0",
               "--phi-deg", "0"})
              .code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("link-budget") {
    const auto r = run({"link-budget", "--tx-dbm", "20", "--tx-gain-dbi", "8.8", "--rx-gain-dbi", "6", "--distance-m",
                        "7", "--freq-hz", "2.6e9", "--extra", "Cable loss=-23.4", "--extra", "LNA gain=33.5"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("Free space path loss") != std::string::npos);
    CHECK(r.out.find("LNA gain") != std::string::npos);
    CHECK(r.out.find("-12.75") != std::string::npos);

    CHECK(run({"link-budget", "--tx-dbm", "20", "--tx-gain-dbi", "0", "--rx-gain-dbi", "0", "--distance-m", "-1",
               "--freq-hz", "2.6e9"})
              .code == 1);
    CHECK(run({"link-budget", "--tx-dbm", "20", "--tx-gain-dbi", "0", "--rx-gain-dbi", "0", "--distance-m", "1",
               "--freq-hz", "2.6e9", "--extra", "oops"})
              .code == 1);

    testing::TempDir dir;
    const auto csv = (dir / "budget.csv").string();
    REQUIRE(run({"link-budget", "--tx-dbm", "20", "--tx-gain-dbi", "0", "--rx-gain-dbi", "0", "--distance-m", "1",
                 "--freq-hz", "2.6e9", "--csv", csv})
                .code == 0);
    CHECK(testing::slurp(csv).starts_with("item,db,running_total_dbm\nTX power,20,20\n"));
    CHECK(run({"link-budget", "--tx-dbm", "20", "--tx-gain-dbi", "0", "--rx-gain-dbi", "0", "--distance-m", "1",
               "--freq-hz", "2.6e9", "--csv", (dir / "no" / "such" / "dir.csv").string()})
              .code == 3);
}

TEST_CASE("steering") {
    const auto r = run({"steering", "--geometry", "2x3", "--spacing-m", "0.071", "--freq-hz", "2.6e9", "--theta-deg",
                        "0", "--phi-deg", "0"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "element,row,col,x_m,y_m,re,im,phase_rad");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(line.find(",1,0,0") != std::string::npos);
    }
    CHECK(rows == 6);
    CHECK(run({"steering", "--geometry", "2by3", "--spacing-m", "0.071", "--freq-hz", "2.6e9", "--theta-deg", "0",
               "--phi-deg", "0"})
              .code == 1);
    CHECK(run({"steering", "--geometry", "2x3", "--spacing-m", "0.071", "--freq-hz", "2.6e9", "--theta-deg", "90",
               "--phi-deg", "0"})
              .code == 1);
}

TEST_CASE("gain-stats") {
    testing::TempDir dir;
    auto r = run({"gain-stats", "--pattern", "builtin:patch", "--out", dir.path().string()});
    REQUIRE(r.code == 0);
    CHECK(std::filesystem::exists(dir / "variation.csv"));
    CHECK(std::filesystem::exists(dir / "dynamic_range.csv"));
    CHECK(std::filesystem::exists(dir / "panel_map.csv"));

    // a 1x2 tabulated pattern on a small grid
    const auto table = dir / "t.csv";
    std::string csv = "element,theta_deg,phi_deg,gain_db\n";
    for (int m = 0; m < 2; ++m)
        for (int t : {-30, 0, 30})
            for (int p : {0, 90}) csv += std::to_string(m) + "," + std::to_string(t) + "," + std::to_string(p) + "," + std::to_string(m * t / 10) + "\n";
    testing::spit(table, csv);
    r = run({"gain-stats", "--pattern", table.string(), "--geometry", "1x2", "--out", (dir / "t").string()});
    REQUIRE(r.code == 0);
    const auto var = testing::slurp(dir / "t" / "variation.csv");
    CHECK(var.find("30,90,3\n") != std::string::npos);

    CHECK(run({"gain-stats", "--pattern", table.string(), "--out", (dir / "u").string()}).code == 1);
    CHECK(run({"gain-stats", "--pattern", (dir / "absent.csv").string(), "--out", dir.path().string()}).code == 3);
    CHECK(run({"gain-stats", "--pattern", "builtin:horn", "--out", dir.path().string()}).code == 1);
    testing::spit(dir / "bad.csv", "element,theta_deg,phi_deg,gain_db\n0,0,0,abc\n");
    r = run({"gain-stats", "--pattern", (dir / "bad.csv").string(), "--geometry", "1x1", "--out", dir.path().string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("row 2") != std::string::npos);
}

TEST_CASE("simulate") {
    testing::TempDir dir;
    const auto cfg = dir / "cfg.json";
    testing::spit(cfg, R"({"trials": 40, "snr_sweep_db": [0, 25]})");
    auto r = run({"simulate", "--config", cfg.string(), "--out", (dir / "a").string(), "--threads", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("wrote 20 records") != std::string::npos);
    CHECK(r.out.find("patch @ 25 dB") != std::string::npos);
    r = run({"simulate", "--config", cfg.string(), "--out", (dir / "b").string(), "--threads", "2"});
    REQUIRE(r.code == 0);
    CHECK(testing::slurp(dir / "a" / "rates.csv") == testing::slurp(dir / "b" / "rates.csv"));

    r = run({"simulate", "--config", cfg.string(), "--out", (dir / "c").string(), "--seed", "5", "--trials", "10"});
    REQUIRE(r.code == 0);
    const auto manifest = nlohmann::json::parse(testing::slurp(dir / "c" / "manifest.json"));
    CHECK(manifest["seed"] == 5);
    CHECK(manifest["config"]["trials"] == 10);

    CHECK(run({"simulate", "--config", (dir / "none.json").string(), "--out", dir.path().string()}).code == 3);
    CHECK(run({"simulate", "--config", cfg.string(), "--out", dir.path().string(), "--trials", "0"}).code == 1);
    testing::spit(dir / "unknown.json", R"({"trails": 3})");
    r = run({"simulate", "--config", (dir / "unknown.json").string(), "--out", dir.path().string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("trails") != std::string::npos);
    testing::spit(dir / "blocker", "x");
    CHECK(run({"simulate", "--config", cfg.string(), "--out", (dir / "blocker").string()}).code == 3);
}
