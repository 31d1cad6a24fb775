#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rissim/circlefit.hpp"
#include "rissim/io.hpp"
#include "test_util.hpp"

using namespace rissim;
using rissim::test::fixture_dir;

TEST_CASE("fixtures reproduce the reference setups exactly", "[experiments]") {
    const Scenario a = load_scenario(fixture_dir() / "ris1-a.scenario");
    CHECK(a.id == "ris1-a");
    CHECK(a.geometry.d1_m == 1.5);
    CHECK(a.geometry.theta1_deg == 30.0);
    CHECK(a.geometry.d2_m == 0.5);
    CHECK(a.geometry.theta2_deg == 0.0);
    CHECK(a.geometry.f_hz == 4.25e9);
    CHECK(a.geometry.pt_dbm == 0.0);
    CHECK(a.panel.group_cols == 2);  // paired columns share one control
    CHECK(a.panel.group_count() == 4);
    CHECK(a.report_phase);
    CHECK(a.direct.kind == DirectLink::Kind::FixedComplex);

    const Scenario b = load_scenario(fixture_dir() / "ris1-b.scenario");
    CHECK(b.geometry.theta1_deg == 50.0);
    CHECK(b.geometry.d2_m == 1.0);
    CHECK(b.geometry.theta2_deg == 30.0);

    const Scenario c = load_scenario(fixture_dir() / "ris2-a.scenario");
    CHECK(c.geometry.f_hz == 27e9);
    CHECK(c.geometry.d1_m == 1.0);
    CHECK(c.geometry.theta1_deg == 35.0);
    CHECK(c.panel.group_cols == 7);  // seven columns share one control
    CHECK_FALSE(c.report_phase);
    CHECK(is_binary_model(c.panel.cell_model));

    const Scenario d = load_scenario(fixture_dir() / "ris2-b.scenario");
    CHECK(d.geometry.theta1_deg == 5.0);
    CHECK(d.geometry.d2_m == 0.5);
}

TEST_CASE("scenario validation names the failing field", "[experiments]") {
    rissim::test::TempDir tmp;
    const auto bad = tmp.path / "bad.scenario";
    write_file_atomic(bad,
                      "id = bad\n[geometry]\nd1_m = 1\ntheta1_deg = 95\nd2_m = 1\n"
                      "theta2_deg = 0\nf_hz = 1e9\n");
    CHECK_THROWS_MATCHES(load_scenario(bad), ConfigError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("theta1_deg")));
}

TEST_CASE("unknown scenario keys are rejected", "[experiments]") {
    rissim::test::TempDir tmp;
    const auto bad = tmp.path / "unknown.scenario";
    write_file_atomic(bad,
                      "id = x\n[geometry]\nd1_m = 1\ntheta1_deg = 10\nd2_m = 1\n"
                      "theta2_deg = 0\nf_hz = 1e9\nbogus_key = 3\n");
    CHECK_THROWS_MATCHES(load_scenario(bad), ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("bogus_key")));
}

TEST_CASE("scenario save/load round trip preserves the value", "[experiments]") {
    rissim::test::TempDir tmp;
    for (const char* name : {"ris1-a", "ris2-b", "demo-spacetime"}) {
        const Scenario original = load_scenario(fixture_dir() / (std::string(name) + ".scenario"));
        const auto copy_path = tmp.path / (std::string(name) + "-copy.scenario");
        save_scenario(original, copy_path);
        const Scenario reloaded = load_scenario(copy_path);
        CHECK(reloaded == original);
    }

    // Including inline response tables and angle tapers.
    Scenario custom = load_scenario(fixture_dir() / "ris1-a.scenario");
    custom.panel = build_panel(
        2, 4, 0.01, 0.01, 2,
        ReflectionModel::angle_dependent(
            ReflectionModel::table_varactor({{0.0, 0.9, -120.0}, {10.0, 0.8, 40.0},
                                             {21.0, 0.85, 250.0}}),
            1.5));
    custom.pattern_kind = PatternKind::Custom;
    custom.pattern_params = PatternParams{.values = {3.0, 18.0}};
    const auto path = tmp.path / "custom.scenario";
    save_scenario(custom, path);
    CHECK(load_scenario(path) == custom);
}

TEST_CASE("table-varactor scenarios can reference an external response file",
          "[experiments]") {
    rissim::test::TempDir tmp;
    const auto path = tmp.path / "table.scenario";
    write_file_atomic(path, std::string("id = table-test\n") +
                                "[geometry]\n"
                                "d1_m = 1.5\ntheta1_deg = 30\nd2_m = 0.5\ntheta2_deg = 0\n"
                                "f_hz = 4.25e9\n"
                                "[model tv]\n"
                                "type = table_varactor\n"
                                "table_file = " +
                                (fixture_dir() / "varactor-table-sample.csv").string() +
                                "\n"
                                "[panel]\n"
                                "rows = 2\ncols = 4\ndx_m = 0.035\ndy_m = 0.035\n"
                                "group_cols = 2\nmodel = tv\n");
    const Scenario s = load_scenario(path);
    const auto* table = base_model(s.panel.cell_model).get_if<TableVaractor>();
    REQUIRE(table != nullptr);
    CHECK(table->samples.size() == 8);
    CHECK(table->samples.front().voltage_v == 0.0);
    CHECK(table->samples.back().voltage_v == 21.0);
}

TEST_CASE("varactor table files validate their header and shape", "[experiments]") {
    rissim::test::TempDir tmp;
    const auto no_header = tmp.path / "nh.csv";
    write_file_atomic(no_header, "0,1,0\n1,1,10\n");
    CHECK_THROWS_AS(load_varactor_table(no_header), ParseError);

    const auto bad_cols = tmp.path / "bc.csv";
    write_file_atomic(bad_cols, "voltage_V,magnitude,phase_deg\n0,1\n");
    CHECK_THROWS_AS(load_varactor_table(bad_cols), ParseError);

    const auto non_monotone = tmp.path / "nm.csv";
    write_file_atomic(non_monotone, "voltage_V,magnitude,phase_deg\n0,1,0\n0,1,10\n");
    CHECK_THROWS_AS(ReflectionModel::table_varactor(load_varactor_table(non_monotone)),
                    ConfigError);
}

TEST_CASE("voltage sweep endpoints coincide for a full-turn cell", "[experiments]") {
    const Scenario s = load_scenario(fixture_dir() / "ris1-a.scenario");
    const auto traj = voltage_sweep(s, 2);
    REQUIRE(traj.size() == 2);
    CHECK(traj[0].voltage_v == 0.0);
    CHECK(traj[1].voltage_v == 21.0);
    // 0 V and 21 V land on the same reflection phase (360-degree span).
    CHECK(std::abs(traj[0].h_up - traj[1].h_up) < 1e-15);
}

TEST_CASE("voltage sweep of the reference fixture traces a circle around the direct path",
          "[experiments]") {
    const Scenario s = load_scenario(fixture_dir() / "ris1-a.scenario");
    const auto traj = voltage_sweep(s, 211);
    REQUIRE(traj.size() == 211);

    std::vector<cdouble> up;
    for (const auto& p : traj) {
        up.push_back(p.h_up);
        CHECK(std::abs(p.h_up - p.h_down) <= 1e-12 * std::abs(p.h_up));
    }
    const CircleFit fit = circle_fit(up);
    CHECK(std::abs(fit.center - cdouble{0.0012, -0.0007}) < 1e-9);
    CHECK(fit.rms_residual <= 1e-9 * fit.radius);
}

TEST_CASE("sweep of a bare single element circles the origin", "[experiments]") {
    Scenario s = load_scenario(fixture_dir() / "ris1-a.scenario");
    s.panel = build_panel(1, 1, 0.01, 0.01, 1, ReflectionModel::ideal_varactor(0, 21, 360, 1));
    s.direct = DirectLink::none();
    const auto traj = voltage_sweep(s, 64);
    const CircleFit fit = circle_fit([&] {
        std::vector<cdouble> pts;
        for (const auto& p : traj) pts.push_back(p.h_up);
        return pts;
    }());
    CHECK(std::abs(fit.center) < 1e-12);
    // Radius equals the product of the two hop magnitudes.
    const double lambda = wavelength_m(s.geometry.f_hz);
    const double g1 = lambda / (4.0 * std::numbers::pi * s.geometry.d1_m);
    const double g2 = lambda / (4.0 * std::numbers::pi * s.geometry.d2_m);
    CHECK(std::abs(fit.radius - g1 * g2) < 1e-12);
}

TEST_CASE("voltage sweep rejects binary models", "[experiments]") {
    const Scenario s = load_scenario(fixture_dir() / "ris2-a.scenario");
    CHECK_THROWS_AS(voltage_sweep(s, 11), ConfigError);
    const Scenario cont = load_scenario(fixture_dir() / "ris1-a.scenario");
    CHECK_THROWS_AS(voltage_sweep(cont, 1), RangeError);
}

TEST_CASE("pattern table rows mirror the report layout", "[experiments]") {
    const std::vector<Scenario> scenes = {load_scenario(fixture_dir() / "ris1-a.scenario"),
                                          load_scenario(fixture_dir() / "ris1-b.scenario")};
    const std::vector<PatternSpec> patterns = {
        pattern_spec(PatternKind::Identical, {.value = 0.0}),
        pattern_spec(PatternKind::Gradient, {.delta_phase_deg = 90.0})};
    const auto rows = pattern_table(scenes, patterns);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        CHECK(row.p_up_dbm == row.p_down_dbm);  // passive reciprocity
        CHECK_FALSE(row.phase_na);
    }
    CHECK(rows[0].scenario == "ris1-a");
    CHECK(rows[0].pattern == "Identical");
    CHECK(rows[1].pattern == "Gradient");
    CHECK(rows[2].scenario == "ris1-b");

    // Row power difference equals the channel-magnitude ratio in dB.
    const Scene ident = make_scene(scenes[0], PatternKind::Identical, {.value = 0.0}, "i");
    const Scene grad =
        make_scene(scenes[0], PatternKind::Gradient, {.delta_phase_deg = 90.0}, "g");
    const double expect = 20.0 * std::log10(std::abs(evaluate_link(grad, Direction::Uplink).h_total) /
                                            std::abs(evaluate_link(ident, Direction::Uplink).h_total));
    CHECK(std::abs((rows[1].p_up_dbm - rows[0].p_up_dbm) - expect) < 1e-9);
}

TEST_CASE("millimeter-wave fixtures render NA phases", "[experiments]") {
    const std::vector<Scenario> scenes = {load_scenario(fixture_dir() / "ris2-a.scenario"),
                                          load_scenario(fixture_dir() / "ris2-b.scenario")};
    const std::vector<PatternSpec> patterns = {
        pattern_spec(PatternKind::Identical, {.value = 0.0}), pattern_spec(PatternKind::Stripe)};
    const auto rows = pattern_table(scenes, patterns);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) CHECK(row.phase_na);
    const std::string csv = report_csv(rows);
    CHECK(csv.find("NA,NA") != std::string::npos);
    CHECK(csv.rfind("scenario,pattern,p_up_dbm,p_down_dbm,phase_up_deg,phase_down_deg\n", 0) ==
          0);
    const std::string table = render_report_table(rows);
    CHECK(table.find("NA") != std::string::npos);
}

TEST_CASE("pattern table output is byte-identical across runs", "[experiments]") {
    const std::vector<Scenario> scenes = {load_scenario(fixture_dir() / "ris1-a.scenario")};
    const std::vector<PatternSpec> patterns = {
        pattern_spec(PatternKind::Identical, {.value = 0.0}),
        pattern_spec(PatternKind::Gradient, {.delta_phase_deg = 90.0})};
    CHECK(report_csv(pattern_table(scenes, patterns)) ==
          report_csv(pattern_table(scenes, patterns)));
    CHECK(report_json(pattern_table(scenes, patterns)) ==
          report_json(pattern_table(scenes, patterns)));
}

TEST_CASE("continuous alignment on a single group only rotates the sum", "[experiments]") {
    Scenario s = load_scenario(fixture_dir() / "ris1-a.scenario");
    s.panel = build_panel(2, 2, 0.0353, 0.0353, 2,
                          ReflectionModel::ideal_varactor(0, 21, 360, 1));  // one group
    s.direct = DirectLink::none();
    const OptimizeResult r = optimize_pattern(s, OptimizeMode::ContinuousAlign);
    CHECK(std::abs(r.gain_db) < 1e-9);
}

TEST_CASE("continuous alignment beats the uniform baseline with a direct path",
          "[experiments]") {
    const Scenario s = load_scenario(fixture_dir() / "ris1-a.scenario");
    const OptimizeResult r = optimize_pattern(s, OptimizeMode::ContinuousAlign);
    CHECK(r.gain_db > 0.0);
}

TEST_CASE("bit search hierarchy: exhaustive >= greedy >= identical", "[experiments]") {
    const Scenario fixture = load_scenario(fixture_dir() / "ris2-a.scenario");
    const OptimizeResult exhaustive = optimize_pattern(fixture, OptimizeMode::ExhaustiveBits);
    const OptimizeResult greedy = optimize_pattern(fixture, OptimizeMode::GreedyBits);
    CHECK(exhaustive.gain_db >= greedy.gain_db - 1e-12);
    CHECK(greedy.gain_db >= -1e-12);
    CHECK(exhaustive.gain_db >= 0.0);

    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> n_groups(4, 10);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        Scenario s;
        s.id = "bits";
        s.geometry = {1.0 + 0.5 * unit(rng), 45.0 * unit(rng), 0.5 + 0.5 * unit(rng),
                      30.0 * unit(rng), 4.25e9, 0.0};
        const int g = n_groups(rng);
        s.panel = build_panel(2, g, 0.0353, 0.0353, 1,
                              ReflectionModel::ideal_pin(0.0, 180.0, 1.0));
        s.direct = unit(rng) < 0.5 ? DirectLink::none()
                                   : DirectLink::fixed({1e-4 * unit(rng), 1e-4 * unit(rng)});
        const double ex = optimize_pattern(s, OptimizeMode::ExhaustiveBits).gain_db;
        const double gr = optimize_pattern(s, OptimizeMode::GreedyBits).gain_db;
        CHECK(ex >= gr - 1e-12);
    }
}

TEST_CASE("optimizer gains are identical in both directions", "[experiments]") {
    const Scenario s = load_scenario(fixture_dir() / "ris2-b.scenario");
    const OptimizeResult r = optimize_pattern(s, OptimizeMode::ExhaustiveBits);
    Scene scene{s.panel, r.pattern, s.geometry, s.direct, "opt"};
    const Scene base = make_scene(s, PatternKind::Identical, {.value = 0.0}, "base");
    const auto gain = [&](Direction d) {
        return 20.0 * std::log10(std::abs(evaluate_link(scene, d).h_total) /
                                 std::abs(evaluate_link(base, d).h_total));
    };
    CHECK(std::abs(gain(Direction::Uplink) - gain(Direction::Downlink)) <= 1e-12);
}

TEST_CASE("optimizer rejects mismatched modes", "[experiments]") {
    const Scenario varactor = load_scenario(fixture_dir() / "ris1-a.scenario");
    const Scenario pin = load_scenario(fixture_dir() / "ris2-a.scenario");
    CHECK_THROWS_AS(optimize_pattern(varactor, OptimizeMode::ExhaustiveBits), ConfigError);
    CHECK_THROWS_AS(optimize_pattern(varactor, OptimizeMode::GreedyBits), ConfigError);
    CHECK_THROWS_AS(optimize_pattern(pin, OptimizeMode::ContinuousAlign), ConfigError);

    // The exhaustive search caps the configuration space it will enumerate.
    Scenario wide = pin;
    wide.panel = build_panel(1, 21, 0.0055, 0.0055, 1, ReflectionModel::ideal_pin(0, 180, 1));
    wide.pattern_kind = PatternKind::Identical;
    wide.pattern_params = PatternParams{.value = 0.0};
    CHECK_THROWS_AS(optimize_pattern(wide, OptimizeMode::ExhaustiveBits), ConfigError);
}

TEST_CASE("trajectory emission schemas", "[experiments]") {
    const Scenario s = load_scenario(fixture_dir() / "ris1-a.scenario");
    const auto traj = voltage_sweep(s, 3);
    const std::string csv = trajectory_csv(traj);
    CHECK(csv.rfind("voltage_v,re_up,im_up,re_down,im_down\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows

    CHECK_THROWS_AS(trajectory_csv({}), Error);
    CHECK_THROWS_AS(trajectory_json({}), Error);
    CHECK_THROWS_AS(report_csv({}), Error);
}
