#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rissim/harmonics.hpp"

using namespace rissim;

namespace {

ReflectionModel ramp() { return ReflectionModel::ideal_varactor(0.0, 21.0, 360.0, 1.0); }

constexpr double kF1 = 10e9;
constexpr double kFm = 0.5e9;  // 0.05 of the carrier

/// Wide panel with one control per column, 0.4-wavelength spacing.
Panel wide_panel(int cols) {
    const double dx = 0.4 * wavelength_m(kF1);
    return build_panel(8, cols, dx, dx, 1, ramp());
}

/// Travelling staircase with spatial gradient beta = 0.2 * carrier wavenumber.
ControlSchedule demo_ramp(const Panel& panel, double beta_frac = 0.2) {
    const double kappa1 = 2.0 * std::numbers::pi * kF1 / kSpeedOfLight;
    return make_phase_ramp_schedule(panel.group_centers_x(), panel.cell_model, 1.0 / kFm, 8,
                                    beta_frac * kappa1);
}

}  // namespace

TEST_CASE("static pattern radiates only at k = 0, peaked at the specular angle",
          "[harmonics]") {
    const Panel panel = wide_panel(16);
    const auto constant = make_uniform_schedule(16, 1.0 / kFm, {{0.0, 1.0, 5.0}});
    const auto spectrum = fourier_coefficients(constant, panel.cell_model, 4);
    const auto grid = make_symmetric_theta_grid(85.0, 0.05);
    const auto map = harmonic_radiation(panel, spectrum, 30.0, kF1, grid, -4, 4);
    const auto dom = dominant_response(map);
    REQUIRE(dom.has_value());
    CHECK(dom->k == 0);
    CHECK(std::abs(dom->theta_deg - (-30.0)) <= 0.05 + 1e-12);

    // Mirror convention: the bounce comes back at the incidence angle.
    RoundTripOptions opts;
    opts.grid_step_deg = 0.05;
    opts.grid_limit_deg = 85.0;
    opts.k_max = 4;
    const BounceResult bounce = single_bounce(panel, spectrum, 30.0, kF1, opts);
    CHECK(bounce.k == 0);
    CHECK(std::abs(bounce.theta_out_deg - 30.0) <= 0.05 + 1e-12);
    CHECK(bounce.f_out_hz == kF1);
}

TEST_CASE("radiation map scales linearly with the coefficients", "[harmonics]") {
    const Panel panel = wide_panel(8);
    const auto spectrum = fourier_coefficients(demo_ramp(panel), panel.cell_model, 3);
    HarmonicSpectrum doubled = spectrum;
    for (int k = -3; k <= 3; ++k)
        for (int g = 0; g < spectrum.channel_count(); ++g)
            doubled.set(k, g, 2.0 * spectrum.at(k, g));

    const auto grid = make_symmetric_theta_grid(80.0, 1.0);
    const auto map = harmonic_radiation(panel, spectrum, 20.0, kF1, grid, -3, 3);
    const auto map2 = harmonic_radiation(panel, doubled, 20.0, kF1, grid, -3, 3);
    for (std::size_t i = 0; i < map.amplitude.size(); ++i)
        CHECK(map2.amplitude[i] == 2.0 * map.amplitude[i]);
}

TEST_CASE("travelling ramp displaces the k = +1 beam per momentum matching", "[harmonics]") {
    const Panel panel = wide_panel(32);
    const auto spectrum = fourier_coefficients(demo_ramp(panel), panel.cell_model, 8);
    const auto grid = make_symmetric_theta_grid(85.0, 0.05);
    const auto map = harmonic_radiation(panel, spectrum, 30.0, kF1, grid, -8, 8);
    const auto dom = dominant_response(map);
    REQUIRE(dom.has_value());
    CHECK(dom->k == 1);

    // Stationary-phase oracle: kappa_in sin(theta_in) + beta + kappa_1 sin(theta*) = 0.
    const double kappa1 = 2.0 * std::numbers::pi * kF1 / kSpeedOfLight;
    const double kappa_shift = 2.0 * std::numbers::pi * (kF1 + kFm) / kSpeedOfLight;
    const double beta = 0.2 * kappa1;
    const double expected =
        rad2deg(std::asin(-(kappa1 * std::sin(deg2rad(30.0)) + beta) / kappa_shift));
    CHECK(std::abs(dom->theta_deg - expected) <= 0.05 + 1e-12);
}

TEST_CASE("harmonic radiation input validation", "[harmonics]") {
    const Panel panel = wide_panel(4);
    const auto spectrum = fourier_coefficients(demo_ramp(panel), panel.cell_model, 2);
    CHECK_THROWS_AS(harmonic_radiation(panel, spectrum, 30.0, kF1, {}, -2, 2), RangeError);
    CHECK_THROWS_AS(harmonic_radiation(panel, spectrum, 95.0, kF1, {0.0}, -2, 2), RangeError);
    CHECK_THROWS_AS(harmonic_radiation(panel, spectrum, 30.0, kF1, {95.0}, -2, 2), RangeError);
    // Harmonic range dipping to non-positive frequency is rejected.
    const auto low_f = fourier_coefficients(demo_ramp(panel), panel.cell_model, 2);
    CHECK_THROWS_AS(harmonic_radiation(panel, low_f, 30.0, 0.6e9, {0.0}, -2, 2), ConfigError);
    // Channel mismatch.
    const Panel other = wide_panel(8);
    CHECK_THROWS_AS(harmonic_radiation(other, spectrum, 30.0, kF1, {0.0}, -2, 2), ConfigError);
}

TEST_CASE("dominant response selection and tie-breaking", "[harmonics]") {
    RadiationMap map;
    map.f_hz = kF1;
    map.f_m_hz = kFm;
    map.ks = {-1, 2};
    map.theta_deg = {-10.0, 10.0};
    map.amplitude.assign(4, cdouble{0.0, 0.0});

    SECTION("single nonzero entry wins") {
        map.amplitude[1] = {0.5, 0.0};  // k = -1, theta = 10
        const auto dom = dominant_response(map);
        REQUIRE(dom.has_value());
        CHECK(dom->k == -1);
        CHECK(dom->theta_deg == 10.0);
    }
    SECTION("ties prefer the smaller |k|") {
        map.amplitude[1] = {0.5, 0.0};            // k = -1
        map.amplitude[2 * 1 + 0] = {0.0, 0.5};    // k = 2, same magnitude
        const auto dom = dominant_response(map);
        REQUIRE(dom.has_value());
        CHECK(dom->k == -1);
    }
    SECTION("ties at equal |k| prefer the smaller angle") {
        map.amplitude[0] = {0.5, 0.0};  // k = -1, theta = -10
        map.amplitude[1] = {0.5, 0.0};  // k = -1, theta = +10
        const auto dom = dominant_response(map);
        REQUIRE(dom.has_value());
        CHECK(dom->theta_deg == -10.0);
    }
    SECTION("all-zero map reports no signal") {
        CHECK_FALSE(dominant_response(map).has_value());
    }
    SECTION("empty map is an argument error") {
        RadiationMap empty;
        CHECK_THROWS_AS(dominant_response(empty), RangeError);
    }
}

TEST_CASE("round trip rejects schedule/panel group mismatches", "[harmonics]") {
    const Panel panel = wide_panel(16);
    const auto wrong = make_uniform_schedule(4, 1.0 / kFm, {{0.0, 1.0, 3.0}});
    CHECK_THROWS_AS(round_trip_test(panel, wrong, 30.0, kF1), ConfigError);
}

TEST_CASE("constant schedule round trip is reciprocal", "[harmonics]") {
    const Panel panel = wide_panel(16);
    const auto constant = make_uniform_schedule(16, 1.0 / kFm, {{0.0, 1.0, 3.0}});
    RoundTripOptions opts;
    opts.grid_step_deg = 0.05;
    opts.grid_limit_deg = 85.0;
    opts.k_max = 4;
    opts.angle_tolerance_deg = 0.05;
    const RoundTripResult r = round_trip_test(panel, constant, 30.0, kF1, opts);
    CHECK(r.k1 == 0);
    CHECK(r.k2 == 0);
    CHECK(r.f2_hz == kF1);
    CHECK(r.f3_hz == kF1);
    CHECK(std::abs(r.theta3_deg - 30.0) < 0.05);
    CHECK(r.reciprocal);
    CHECK(r.ledger.balanced);
    CHECK(std::abs(r.ledger.beta_s_rad_per_m) < 1e-12);
}

TEST_CASE("travelling ramp round trip shifts angle and frequency (coarse grid)",
          "[harmonics]") {
    const Panel panel = wide_panel(64);
    const auto schedule = demo_ramp(panel);
    RoundTripOptions opts;
    opts.grid_step_deg = 0.05;
    const RoundTripResult r = round_trip_test(panel, schedule, 30.0, kF1, opts);

    CHECK(r.k1 == 1);
    CHECK(r.k2 == 1);
    CHECK(r.f2_hz == kF1 + kFm);
    CHECK(r.f3_hz == kF1 + 2.0 * kFm);
    // Phase-matching oracle: sin(theta2) = (0.5 + 0.2) * 10/10.5, then
    // sin(theta3) = (0.7 + 0.2) * 10/11.
    CHECK(std::abs(r.theta2_deg - rad2deg(std::asin(0.7 * 10.0 / 10.5))) < 0.1);
    CHECK(std::abs(r.theta3_deg - rad2deg(std::asin(0.9 * 10.0 / 11.0))) < 0.1);
    CHECK_FALSE(r.reciprocal);
    CHECK(r.ledger.balanced);

    // The dominant harmonic carries the programmed spatial gradient.
    const auto spectrum = fourier_coefficients(schedule, panel.cell_model, 8);
    const double kappa1 = 2.0 * std::numbers::pi * kF1 / kSpeedOfLight;
    const double beta = spatial_phase_gradient(spectrum, 1, panel.group_centers_x());
    CHECK(std::abs(beta - 0.2 * kappa1) < 1e-6 * kappa1);
}

TEST_CASE("reversing the gradient on the return pass restores the frequency", "[harmonics]") {
    const Panel panel = wide_panel(32);
    const auto forward = demo_ramp(panel);
    // Time-reversed staircase: dominant harmonic flips to k = -1.
    const double kappa1 = 2.0 * std::numbers::pi * kF1 / kSpeedOfLight;
    auto reversed_groups = std::vector<std::vector<ScheduleSegment>>();
    for (int g = 0; g < forward.group_count(); ++g) {
        const auto& segs = forward.segments(g);
        std::vector<ScheduleSegment> rev;
        for (std::size_t i = segs.size(); i-- > 0;) {
            const auto& s = segs[i];
            rev.push_back({1.0 - s.end_frac, 1.0 - s.start_frac, s.control_value});
        }
        reversed_groups.push_back(std::move(rev));
    }
    const auto backward = ControlSchedule::make(forward.period_s(), std::move(reversed_groups));

    RoundTripOptions opts;
    opts.grid_step_deg = 0.05;
    const auto spec_fwd = fourier_coefficients(forward, panel.cell_model, opts.k_max);
    const auto spec_bwd = fourier_coefficients(backward, panel.cell_model, opts.k_max);

    const BounceResult pass1 = single_bounce(panel, spec_fwd, 30.0, kF1, opts);
    REQUIRE(pass1.k == 1);
    const BounceResult pass2 =
        single_bounce(panel, spec_bwd, pass1.theta_out_deg, pass1.f_out_hz, opts);
    CHECK(pass2.k == -1);
    CHECK(pass2.f_out_hz == kF1);  // harmonic cancellation
    (void)kappa1;
}

TEST_CASE("time-domain oracle confirms the radiation map", "[harmonics]") {
    // Broadside observation keeps the element retardations zero, so every
    // dwell boundary stays aligned with the sampling grid.
    Panel panel = build_panel(2, 4, 0.01, 0.01, 1, ramp());
    const auto square = make_square_schedule(4, 1e-6, 0.0, 10.5);
    const auto spectrum = fourier_coefficients(square, panel.cell_model, 8);
    const auto map = harmonic_radiation(panel, spectrum, 25.0, kF1, {0.0}, -8, 8);
    const auto lines = time_domain_oracle(panel, square, 25.0, kF1, 0.0, 4, 1 << 15, 8);
    for (std::size_t ki = 0; ki < map.ks.size(); ++ki)
        CHECK(std::abs(map.at(ki, 0) - lines.at(map.ks[ki])) < 1e-5);

    // Off-broadside the retardations cross dwell boundaries mid-sample; the
    // oracle is then resolution-limited at O(1/samples_per_period).
    const auto oblique_map = harmonic_radiation(panel, spectrum, 25.0, kF1, {20.0}, -8, 8);
    const auto oblique = time_domain_oracle(panel, square, 25.0, kF1, 20.0, 4, 1 << 15, 8);
    for (std::size_t ki = 0; ki < oblique_map.ks.size(); ++ki)
        CHECK(std::abs(oblique_map.at(ki, 0) - oblique.at(oblique_map.ks[ki])) < 1e-2);
}
