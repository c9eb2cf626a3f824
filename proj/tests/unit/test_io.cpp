#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "../support/instances.hpp"
#include "quantdyn/io.hpp"

using namespace quantdyn;
using namespace quantdyn::testing;

TEST_CASE("doubles format with shortest round-trip representation") {
    GaussianSampler sampler(3, 0);
    for (int rep = 0; rep < 1000; ++rep) {
        const double x = sampler.next() * std::pow(10.0, (rep % 13) - 6);
        CHECK(parse_double(format_double(x)) == x);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    CHECK_THROWS_AS(parse_double("1.5x"), ParseError);
    CHECK_THROWS_AS(parse_double(""), ParseError);
}

TEST_CASE("vector literals") {
    CHECK(parse_vector("2,1,0.1") == RealVector{2.0, 1.0, 0.1});
    CHECK(parse_vector("-3") == RealVector{-3.0});
    CHECK_THROWS_AS(parse_vector("1,,2"), ParseError);
    CHECK_THROWS_AS(parse_vector("a,b"), ParseError);
}

TEST_CASE("trajectory CSV round-trip") {
    const ExperimentConfig config = example1_config({0.5, 0.5, 0.5, 0.5}, 0.1, 1.0, 50);
    const Trajectory traj = run(config);

    std::stringstream buffer;
    write_trajectory_csv(buffer, traj);
    const Trajectory parsed = read_trajectory_csv(buffer, QuantizationMode::Binary);

    REQUIRE(parsed.size() == traj.size());
    CHECK(parsed.n == traj.n);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        CHECK(parsed.records[k].t == traj.records[k].t);
        CHECK(parsed.records[k].eta == traj.records[k].eta);
        CHECK(parsed.records[k].y == traj.records[k].y);
        CHECK(parsed.records[k].w.same_state(traj.records[k].w));
    }
}

TEST_CASE("trajectory CSV rejects malformed input") {
    std::stringstream empty("");
    CHECK_THROWS_AS(read_trajectory_csv(empty, QuantizationMode::Binary), ParseError);

    std::stringstream no_rows("t,eta,y_1,w_1,delta\n");
    CHECK_THROWS_AS(read_trajectory_csv(no_rows, QuantizationMode::Binary), ParseError);

    std::stringstream bad_header("time,eta,y_1,w_1,delta\n0,0.1,1,1,1\n");
    CHECK_THROWS_AS(read_trajectory_csv(bad_header, QuantizationMode::Binary), ParseError);

    // Tampered quantized state: w_1 does not match the projection of y.
    std::stringstream tampered("t,eta,y_1,w_1,delta\n0,0.1,-1,1,1\n");
    CHECK_THROWS_AS(read_trajectory_csv(tampered, QuantizationMode::Binary), ParseError);

    // Non-consecutive t.
    std::stringstream skipped("t,eta,y_1,w_1,delta\n0,0.1,1,1,1\n2,0.1,1,1,1\n");
    CHECK_THROWS_AS(read_trajectory_csv(skipped, QuantizationMode::Binary), ParseError);
}

TEST_CASE("config JSON round-trip") {
    ExperimentConfig config = synthetic_fig2_config();
    const nlohmann::json doc = config_to_json(config);
    const ExperimentConfig parsed = config_from_json(doc);

    CHECK(parsed.mode == config.mode);
    CHECK(parsed.teacher.w_star == config.teacher.w_star);
    CHECK(parsed.teacher.v == config.teacher.v);
    CHECK(parsed.iterations == config.iterations);
    CHECK(parsed.schedule.kind() == config.schedule.kind());
    CHECK(parsed.schedule.eta(0) == config.schedule.eta(0));
    CHECK(parsed.y0_seed == config.y0_seed);
    CHECK(parsed.sign_tail == config.sign_tail);

    // A manifest wraps the same config under "config".
    const ExperimentConfig from_manifest = config_from_json(manifest_for(config.resolved()));
    CHECK(from_manifest.y0.has_value());
    CHECK(*from_manifest.y0 == config.resolve_y0());
}

TEST_CASE("config JSON errors carry field paths") {
    nlohmann::json doc = config_to_json(synthetic_fig2_config());
    doc.erase("mode");
    CHECK_THROWS_WITH_AS(config_from_json(doc), doctest::Contains("config.mode"), ParseError);

    doc = config_to_json(synthetic_fig2_config());
    doc["schedule"]["eta"] = "fast";
    CHECK_THROWS_WITH_AS(config_from_json(doc), doctest::Contains("config.schedule.eta"),
                         ParseError);

    doc = config_to_json(synthetic_fig2_config());
    doc["iterations"] = 0;
    CHECK_THROWS_AS(config_from_json(doc), InvalidValue);

    // The true-gradient rule is refused with an explanation.
    doc = config_to_json(synthetic_fig2_config());
    doc["update_rule"] = "pgd";
    CHECK_THROWS_WITH_AS(config_from_json(doc), doctest::Contains("almost everywhere"),
                         InvalidValue);
}

TEST_CASE("seeded config specs resolve deterministically") {
    nlohmann::json doc;
    doc["mode"] = "ternary";
    doc["teacher"] = {{"w_star", {{"seed", 5}, {"n", 6}}}, {"v", {{"seed", 9}, {"m", 3}}}};
    doc["schedule"] = {{"kind", "harmonic"}, {"a", 0.5}};
    doc["iterations"] = 20;
    doc["y0"] = {{"seed", 4}, {"scale", 0.5}};

    const ExperimentConfig a = config_from_json(doc);
    const ExperimentConfig b = config_from_json(doc);
    CHECK(a.teacher.w_star == b.teacher.w_star);
    CHECK(a.teacher.v == b.teacher.v);
    CHECK(std::abs(norm(a.teacher.w_star) - 1.0) <= 1e-12);
    CHECK(run(a).records.back().y == run(b).records.back().y);
}

TEST_CASE("sign matrix CSV shape") {
    const Trajectory traj = run(example1_config({0.5, 0.5, 0.5, 0.5}, 0.1, 1.0, 10));
    std::stringstream buffer;
    write_sign_matrix_csv(buffer, sign_matrix(traj, 5));
    std::string line;
    int rows = 0;
    while (std::getline(buffer, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 4);
        for (char ch : line) CHECK((ch == '-' || ch == '0' || ch == '1' || ch == ','));
    }
    CHECK(rows == 4);
}
