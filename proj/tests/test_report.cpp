#include <catch2/catch.hpp>

#include <sstream>

#include "fixtures.hpp"
#include "wlantp/report.hpp"

using namespace wlantp;

TEST_CASE("comparison rows carry the error column only when simulated") {
    const auto report = aggregate_throughput(fixtures::dot11b_row(0, 1));
    const ComparisonRow bare = ComparisonRow::from(report);
    CHECK_FALSE(bare.simulation_mbps.has_value());
    CHECK_FALSE(bare.error_percent.has_value());

    SimConfig sc;
    sc.scenario = fixtures::dot11b_row(0, 1);
    sc.seed = 42;
    sc.duration_s = 10.0;
    sc.warmup_s = 1.0;
    const SimResult sim = run_simulation(sc);
    const ComparisonRow full = ComparisonRow::from(report, &sim);
    REQUIRE(full.simulation_mbps.has_value());
    REQUIRE(full.error_percent.has_value());
    CHECK(*full.error_percent ==
          Approx(100.0 * std::fabs(report.aggregate_mbps - sim.aggregate_mbps) /
                 sim.aggregate_mbps));
}

TEST_CASE("human and CSV renderings include every row") {
    std::vector<ComparisonRow> rows;
    rows.push_back({"alpha", 1.2345, std::nullopt, std::nullopt});
    rows.push_back({"beta", 2.5, 2.4, 4.1667});

    std::ostringstream human;
    render_human(human, rows);
    CHECK(human.str().find("alpha") != std::string::npos);
    CHECK(human.str().find("1.2345") != std::string::npos);

    std::ostringstream csv;
    render_csv(csv, rows);
    std::string line;
    std::istringstream in(csv.str());
    std::getline(in, line);
    CHECK(line == "label,analysis_mbps,simulation_mbps,error_percent");
    std::getline(in, line);
    CHECK(line.find("\"alpha\",1.2345,,") == 0);
    std::getline(in, line);
    CHECK(line.find("\"beta\"") == 0);
}

TEST_CASE("JSON payloads round-trip through the parser") {
    const auto report = aggregate_throughput(fixtures::dot11g_row(5, 1));
    const nlohmann::json j = to_json(report);
    const auto parsed = nlohmann::json::parse(j.dump());
    CHECK(parsed.at("standard") == "80211g");
    CHECK(parsed.at("n_max").get<int>() == report.n_max);
    CHECK(parsed.at("captured_mass").get<double>() == Approx(report.captured_mass));
    CHECK(parsed.at("aggregate_mbps").get<double>() == Approx(report.aggregate_mbps));
    CHECK(parsed.at("classes").size() == 6);

    SimConfig sc;
    sc.scenario = fixtures::dot11b_row(0, 1);
    sc.seed = 1;
    sc.duration_s = 5.0;
    sc.warmup_s = 0.5;
    const auto sim_json = to_json(run_simulation(sc));
    CHECK(sim_json.at("per_sta_mbps").size() == 10);
    CHECK(nlohmann::json::parse(sim_json.dump()) == sim_json);
}

TEST_CASE("format names parse strictly") {
    CHECK(parse_format("human") == OutputFormat::human);
    CHECK(parse_format("csv") == OutputFormat::csv);
    CHECK(parse_format("json") == OutputFormat::json);
    CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}
