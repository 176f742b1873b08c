#include "doctest.h"
#include "ris/config_io.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace ris;

TEST_CASE("config text with comments and overrides") {
    const auto c = parse_config_text(
        "# experiment\n"
        "num_elements = 32\n"
        "\n"
        "pilot_budgets = 2, 4, 8   # sweep\n"
        "data_snr_db=-10\n"
        "ue_angle_min_deg = -45\n"
        "noise_free = true\n");
    CHECK(c.num_elements == 32);
    CHECK(c.pilot_budgets == std::vector<int>{2, 4, 8});
    CHECK(c.data_snr_db == -10.0);
    CHECK(c.ue_angle_range.lower == doctest::Approx(-kPi / 4.0));
    CHECK(c.noise_free);
}

TEST_CASE("config errors carry a line or a key") {
    try {
        parse_config_text("num_elements = 8\nbogus line\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_config_text("grid_points = many\n"), ParseError);
    try {
        ExperimentConfig c;
        apply_setting(c, "nonsense", "1");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "nonsense");
    }
    CHECK_THROWS_AS(parse_config({}, {"num_trials=0"}), ValidationError);
    CHECK_THROWS_AS(parse_config({}, {"num_trials"}), ValidationError);
    CHECK_THROWS_AS(parse_config("/nonexistent/ris.cfg", {}), IoError);
    CHECK(parse_config({}, {"rng_seed=12", "num_trials=7"}).rng_seed == 12);
}

TEST_CASE("rate CSV writes six significant digits sorted by L and reads back") {
    std::vector<RateCurvePoint> pts(2);
    pts[0].pilot_budget = 10;
    pts[0].mean_rate_ml = 10.123456789;
    pts[0].ratio_ml = 0.987654321;
    pts[0].trial_count = 5;
    pts[1].pilot_budget = 2;
    pts[1].mean_rate_ml = 1.0 / 3.0;
    pts[1].trial_count = 5;
    std::ostringstream out;
    write_rate_csv(pts, out);
    const std::string text = out.str();
    CHECK(text.rfind(std::string(kRateCsvHeader) + "\n2,0.333333,", 0) == 0);
    CHECK(text.find("\n10,10.1235,0,0,0.987654,") != std::string::npos);

    std::istringstream in(text);
    const auto back = read_rate_csv(in);
    REQUIRE(back.size() == 2);
    CHECK(back[0].pilot_budget == 2);
    CHECK(back[1].mean_rate_ml == doctest::Approx(10.1235));
    CHECK(back[1].trial_count == 5);

    std::istringstream bad("L,x\n");
    CHECK_THROWS_AS(read_rate_csv(bad), ParseError);
}

TEST_CASE("headers") {
    CHECK(std::string(kRateCsvHeader) ==
          "L,mean_rate_ml,mean_rate_ls,mean_capacity,ratio_ml,ratio_ls,stderr_ml,stderr_ls,trials");
    CHECK(std::string(kUtilityCsvHeader) == "L,angle_rad,utility_db,is_argmax");
}

TEST_CASE("utility CSV has one block per L and one argmax per block") {
    ExperimentConfig c;
    c.num_elements = 16;
    c.grid_points = 300;
    c.pilot_budgets = {2};
    const auto trace = run_utility_trace(c, -kPi / 4.0, 10);
    std::ostringstream out;
    write_utility_csv(trace, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == kUtilityCsvHeader);
    std::map<int, int> rows, argmax;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string f[4];
        for (auto& x : f) std::getline(ss, x, ',');
        const int l = std::stoi(f[0]);
        ++rows[l];
        argmax[l] += std::stoi(f[3]);
    }
    const auto grid_size = static_cast<int>(make_search_grid(c).size());
    CHECK(rows.size() == 9);
    for (int l = 2; l <= 10; ++l) {
        CHECK(rows[l] == grid_size);
        CHECK(argmax[l] == 1);
    }
}

TEST_CASE("emitters report I/O failures") {
    std::vector<RateCurvePoint> pts(1);
    pts[0].pilot_budget = 2;
    CHECK_THROWS_AS(emit_rate_csv(pts, "/nonexistent-dir/x.csv"), IoError);
    CHECK_THROWS_AS(emit_rate_csv({}, std::filesystem::temp_directory_path() / "ris_empty.csv"), DomainError);
}

TEST_CASE("format_sig") {
    CHECK(format_sig(3.14159265) == "3.14159");
    CHECK(format_sig(1234567.0) == "1.23457e+06");
    CHECK(format_sig(2.0) == "2");
}
