#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "rissim/pattern.hpp"

using namespace rissim;

namespace {
ReflectionModel ramp() { return ReflectionModel::ideal_varactor(0.0, 21.0, 360.0, 1.0); }
ReflectionModel pin() { return ReflectionModel::ideal_pin(0.0, 180.0, 1.0); }
}  // namespace

TEST_CASE("single-element panel sits at the origin", "[panel]") {
    const Panel p = build_panel(1, 1, 0.01, 0.01, 1, ramp());
    REQUIRE(p.element_count() == 1);
    CHECK(p.element_positions[0] == Vec3{0.0, 0.0, 0.0});
}

TEST_CASE("2x2 panel is centered", "[panel]") {
    const Panel p = build_panel(2, 2, 0.02, 0.02, 2, ramp());
    std::set<double> xs, ys;
    for (const auto& pos : p.element_positions) {
        xs.insert(pos.x);
        ys.insert(pos.y);
        CHECK(pos.z == 0.0);
    }
    CHECK(xs == std::set<double>{-0.01, 0.01});
    CHECK(ys == std::set<double>{-0.01, 0.01});
}

TEST_CASE("8x8 panel with paired columns has four super-columns", "[panel]") {
    const Panel p = build_panel(8, 8, 0.0353, 0.0353, 2, ramp());
    CHECK(p.group_count() == 4);
    CHECK(p.element_count() == 64);
    // Row-major layout, contiguous column blocks.
    CHECK(p.group_of(0) == 0);
    CHECK(p.group_of(1) == 0);
    CHECK(p.group_of(2) == 1);
    CHECK(p.group_of(7) == 3);
    CHECK(p.group_of(8) == 0);  // second row starts over
    // Group centers are the mean of the member columns.
    CHECK(std::abs(p.group_center_x(0) - (-3.0 * 0.0353)) < 1e-15);
    CHECK(std::abs(p.group_center_x(3) - (3.0 * 0.0353)) < 1e-15);
}

TEST_CASE("panel construction errors", "[panel]") {
    CHECK_THROWS_AS(build_panel(8, 8, 0.01, 0.01, 3, ramp()), ConfigError);
    CHECK_THROWS_AS(build_panel(0, 8, 0.01, 0.01, 2, ramp()), ConfigError);
    CHECK_THROWS_AS(build_panel(8, 8, 0.0, 0.01, 2, ramp()), ConfigError);
}

TEST_CASE("identical pattern broadcasts one control value", "[panel]") {
    const Panel p = build_panel(2, 8, 0.01, 0.01, 2, ramp());
    const CodingPattern pat = make_pattern(PatternKind::Identical, p, {.value = 7.0});
    CHECK(pat.values == std::vector<double>{7.0, 7.0, 7.0, 7.0});
}

TEST_CASE("gradient pattern inverts the phase curve per group", "[panel]") {
    const Panel p = build_panel(2, 8, 0.01, 0.01, 2, ramp());
    const CodingPattern pat = make_pattern(PatternKind::Gradient, p, {.delta_phase_deg = 90.0});
    REQUIRE(pat.values.size() == 4);
    // Independent inversion of the linear phase curve: V = 21 * phase / 360.
    CHECK(pat.values[0] == 0.0);
    CHECK(pat.values[1] == 21.0 * 90.0 / 360.0);
    CHECK(pat.values[2] == 21.0 * 180.0 / 360.0);
    CHECK(pat.values[3] == 21.0 * 270.0 / 360.0);
}

TEST_CASE("stripe pattern alternates bits", "[panel]") {
    const Panel p = build_panel(2, 8, 0.01, 0.01, 2, pin());
    const CodingPattern pat = make_pattern(PatternKind::Stripe, p);
    CHECK(pat.values == std::vector<double>{0.0, 1.0, 0.0, 1.0});
}

TEST_CASE("pattern/model compatibility", "[panel]") {
    const Panel varactor_panel = build_panel(2, 4, 0.01, 0.01, 2, ramp());
    const Panel pin_panel = build_panel(2, 4, 0.01, 0.01, 2, pin());
    CHECK_THROWS_AS(make_pattern(PatternKind::Gradient, pin_panel, {}), ConfigError);
    CHECK_THROWS_AS(make_pattern(PatternKind::Stripe, varactor_panel, {}), ConfigError);
    CHECK_THROWS_AS(make_pattern(PatternKind::Custom, varactor_panel, {.values = {1.0}}),
                    ConfigError);
    // Gradient step too steep for a narrow-span cell.
    const Panel narrow =
        build_panel(2, 8, 0.01, 0.01, 2, ReflectionModel::ideal_varactor(0.0, 21.0, 180.0, 1.0));
    CHECK_THROWS_AS(make_pattern(PatternKind::Gradient, narrow, {.delta_phase_deg = 90.0}),
                    UnreachablePhaseError);
}

TEST_CASE("apply_pattern assigns each element its group's coefficient", "[panel]") {
    const Panel p = build_panel(2, 8, 0.01, 0.01, 2, ramp());
    const CodingPattern pat = make_pattern(PatternKind::Identical, p, {.value = 4.2});
    const auto coeffs = apply_pattern(p, pat, 0.0, 0.0, Direction::Uplink);
    REQUIRE(static_cast<int>(coeffs.size()) == p.element_count());
    for (const auto& c : coeffs) CHECK(c == coeffs[0]);  // broadcast, bitwise
}

TEST_CASE("stripe on PIN cells yields +1/-1 blocks", "[panel]") {
    const Panel p = build_panel(1, 4, 0.01, 0.01, 2, pin());
    const auto coeffs =
        apply_pattern(p, make_pattern(PatternKind::Stripe, p), 0.0, 0.0, Direction::Uplink);
    REQUIRE(coeffs.size() == 4);
    CHECK(std::abs(coeffs[0] - cdouble{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(coeffs[1] - cdouble{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(coeffs[2] - cdouble{-1.0, 0.0}) < 1e-15);
    CHECK(std::abs(coeffs[3] - cdouble{-1.0, 0.0}) < 1e-15);
}

TEST_CASE("gradient pattern composes to blockwise element phases", "[panel]") {
    const Panel p = build_panel(1, 8, 0.01, 0.01, 2, ramp());
    const auto coeffs = apply_pattern(
        p, make_pattern(PatternKind::Gradient, p, {.delta_phase_deg = 90.0}), 0.0, 0.0,
        Direction::Uplink);
    const double expected[] = {0.0, 0.0, 90.0, 90.0, 180.0, 180.0, 270.0, 270.0};
    for (int n = 0; n < 8; ++n)
        CHECK(std::abs(wrap_deg_180(rad2deg(std::arg(coeffs[n])) - expected[n])) < 1e-12);
}

TEST_CASE("elements within one group are interchangeable", "[panel]") {
    const Panel p = build_panel(3, 6, 0.01, 0.01, 3, ramp());
    const auto coeffs = apply_pattern(
        p, make_pattern(PatternKind::Gradient, p, {.delta_phase_deg = 45.0}), 10.0, -20.0,
        Direction::Downlink);
    for (int n = 0; n < p.element_count(); ++n)
        for (int m = 0; m < p.element_count(); ++m)
            if (p.group_of(n) == p.group_of(m)) CHECK(coeffs[n] == coeffs[m]);
}

TEST_CASE("apply_pattern rejects group-count mismatches", "[panel]") {
    const Panel p = build_panel(2, 8, 0.01, 0.01, 2, ramp());
    CodingPattern bad{PatternKind::Custom, {1.0, 2.0}};
    CHECK_THROWS_AS(apply_pattern(p, bad, 0.0, 0.0, Direction::Uplink), ConfigError);
}
