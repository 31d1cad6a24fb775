#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rissim/io.hpp"
#include "rissim/tdd.hpp"

namespace rissim::cli {

#ifndef RISSIM_DEFAULT_FIXTURE_DIR
#define RISSIM_DEFAULT_FIXTURE_DIR "fixtures"
#endif

inline std::filesystem::path fixture_dir() {
    if (const char* env = std::getenv("RISSIM_FIXTURE_DIR")) return env;
    return RISSIM_DEFAULT_FIXTURE_DIR;
}

/// A scenario reference is either a path or a fixture id resolved against
/// the fixture directory.
inline std::filesystem::path resolve_scenario_path(const std::string& ref) {
    if (std::filesystem::exists(ref)) return ref;
    const std::filesystem::path candidate = fixture_dir() / (ref + ".scenario");
    if (std::filesystem::exists(candidate)) return candidate;
    throw Error("scenario '" + ref + "' not found (no such file, and no fixture at " +
                candidate.string() + ")");
}

namespace detail {

inline std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

inline PatternSpec resolve_pattern_token(const std::string& token, const Scenario& scenario,
                                         std::optional<double> identical_value,
                                         double gradient_step_deg) {
    PatternSpec spec;
    if (token == "identical") {
        spec.kind = PatternKind::Identical;
        spec.params.value =
            identical_value.value_or(control_range(scenario.panel.cell_model).first);
    } else if (token == "gradient") {
        spec.kind = PatternKind::Gradient;
        spec.params.delta_phase_deg = gradient_step_deg;
    } else if (token == "stripe") {
        spec.kind = PatternKind::Stripe;
    } else if (token == "scenario") {
        spec.kind = scenario.pattern_kind;
        spec.params = scenario.pattern_params;
    } else {
        throw Error("unknown pattern '" + token + "' (expected identical, gradient, stripe)");
    }
    spec.label = to_string(spec.kind);
    return spec;
}

inline std::vector<std::string> default_pattern_tokens(const Scenario& scenario) {
    if (is_binary_model(scenario.panel.cell_model)) return {"identical", "stripe"};
    return {"identical", "gradient"};
}

}  // namespace detail

/// Front end: parses argv (program name excluded), runs one subcommand.
/// Exit codes: 0 success, 1 domain error, 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"RIS-assisted TDD link simulator: uplink/downlink channels, reciprocity "
                 "checks, and the mechanisms that break them"};
    app.name("rissim");
    app.require_subcommand(1);

    // --- sweep ---------------------------------------------------------
    auto* sweep = app.add_subcommand(
        "sweep", "Trace the received signal in the complex plane over a control-voltage sweep");
    std::string sweep_scenario;
    int sweep_steps = 211;
    std::string sweep_out;
    std::string sweep_json;
    sweep->add_option("--scenario", sweep_scenario, "Scenario file or fixture id")->required();
    sweep->add_option("--steps", sweep_steps, "Number of sweep points")->default_val(211);
    sweep->add_option("--out", sweep_out,
                      "Trajectory CSV (voltage_v,re_up,im_up,re_down,im_down)")
        ->required();
    sweep->add_option("--json", sweep_json, "Optional JSON mirror of the trajectory");
    sweep->callback([&] {
        const Scenario scenario = load_scenario(resolve_scenario_path(sweep_scenario));
        const auto trajectory = voltage_sweep(scenario, sweep_steps);
        save_trajectory_csv(trajectory, sweep_out);
        if (!sweep_json.empty()) save_trajectory_json(trajectory, sweep_json);
        out << "wrote " << trajectory.size() << " sweep points to " << sweep_out << "\n";
    });

    // --- table ----------------------------------------------------------
    auto* table = app.add_subcommand(
        "table", "Uplink/downlink received power and phase for static coding patterns");
    std::vector<std::string> table_scenarios;
    std::vector<std::string> table_patterns;
    std::optional<double> table_identical_value;
    double table_gradient_step = 90.0;
    std::string table_out, table_json;
    table->add_option("--scenario", table_scenarios, "Scenario file(s) or fixture id(s)")
        ->required();
    table->add_option("--patterns", table_patterns,
                      "Patterns to evaluate (identical, gradient, stripe); default picks "
                      "identical plus the model's native non-uniform pattern")
        ->delimiter(',');
    double table_identical_value_raw = 0.0;
    auto* tiv = table->add_option("--identical-value", table_identical_value_raw,
                                  "Control value for the identical pattern");
    table->add_option("--gradient-step", table_gradient_step,
                      "Per-super-column phase step of the gradient pattern, degrees")
        ->default_val(90.0);
    table->add_option("--out", table_out, "Report CSV path");
    table->add_option("--json", table_json, "Report JSON path");
    table->callback([&] {
        if (tiv->count() > 0) table_identical_value = table_identical_value_raw;
        std::vector<ReportRow> rows;
        for (const auto& ref : table_scenarios) {
            const Scenario scenario = load_scenario(resolve_scenario_path(ref));
            const auto tokens =
                table_patterns.empty() ? detail::default_pattern_tokens(scenario) : table_patterns;
            std::vector<PatternSpec> specs;
            specs.reserve(tokens.size());
            for (const auto& token : tokens)
                specs.push_back(detail::resolve_pattern_token(token, scenario,
                                                              table_identical_value,
                                                              table_gradient_step));
            const auto scenario_rows = pattern_table({scenario}, specs);
            rows.insert(rows.end(), scenario_rows.begin(), scenario_rows.end());
        }
        out << render_report_table(rows);
        if (!table_out.empty()) save_report_csv(rows, table_out);
        if (!table_json.empty()) save_report_json(rows, table_json);
    });

    // --- reciprocity ------------------------------------------------------
    auto* recip = app.add_subcommand(
        "reciprocity", "Evaluate both directions with identical panel state and compare");
    std::string recip_scenario;
    std::string recip_pattern = "scenario";
    double recip_tol_db = 1e-9, recip_tol_deg = 1e-9;
    std::optional<double> recip_identical_value;
    double recip_identical_value_raw = 0.0;
    double recip_gradient_step = 90.0;
    recip->add_option("--scenario", recip_scenario, "Scenario file or fixture id")->required();
    recip->add_option("--pattern", recip_pattern,
                      "Pattern override: identical, gradient, stripe, or 'scenario'")
        ->default_val("scenario");
    auto* riv = recip->add_option("--identical-value", recip_identical_value_raw,
                                  "Control value for the identical pattern");
    recip->add_option("--gradient-step", recip_gradient_step,
                      "Gradient phase step, degrees")->default_val(90.0);
    recip->add_option("--tol-db", recip_tol_db, "Magnitude tolerance, dB")->default_val(1e-9);
    recip->add_option("--tol-deg", recip_tol_deg, "Phase tolerance, degrees")->default_val(1e-9);
    recip->callback([&] {
        if (riv->count() > 0) recip_identical_value = recip_identical_value_raw;
        const Scenario scenario = load_scenario(resolve_scenario_path(recip_scenario));
        const PatternSpec spec = detail::resolve_pattern_token(
            recip_pattern, scenario, recip_identical_value, recip_gradient_step);
        const Scene scene = make_scene(scenario, spec.kind, spec.params, spec.label);
        const ReciprocityReport rep = reciprocity_report(scene, recip_tol_db, recip_tol_deg);
        out << scenario.id << " / " << spec.label << ": " << render_reciprocity(rep) << "\n";
        out << "  h_up   = " << detail::fmt("%.12e", rep.h_up.real()) << " + "
            << detail::fmt("%.12e", rep.h_up.imag()) << "j\n";
        out << "  h_down = " << detail::fmt("%.12e", rep.h_down.real()) << " + "
            << detail::fmt("%.12e", rep.h_down.imag()) << "j\n";
        out << "  at report precision: " << render_dbm(rep.magnitude_deviation_db) << " dB / "
            << render_phase_deg(rep.phase_deviation_deg) << " deg\n";
    });

    // --- harmonics --------------------------------------------------------
    auto* harm = app.add_subcommand(
        "harmonics", "Harmonic radiation map of a periodically modulated panel");
    std::string harm_scenario, harm_schedule, harm_out;
    int harm_k_max = 8;
    double harm_grid_deg = 0.25;
    std::optional<double> harm_theta_in;
    double harm_theta_in_raw = 0.0;
    harm->add_option("--scenario", harm_scenario, "Scenario file or fixture id (panel + model)")
        ->required();
    harm->add_option("--schedule", harm_schedule, "Control schedule file")->required();
    auto* hti = harm->add_option("--theta-in", harm_theta_in_raw,
                                 "Incidence angle, degrees (default: scenario theta1)");
    harm->add_option("--k-max", harm_k_max, "Largest harmonic order")->default_val(8);
    harm->add_option("--grid-deg", harm_grid_deg, "Observation grid step, degrees")
        ->default_val(0.25);
    harm->add_option("--out", harm_out, "Radiation map CSV (k,theta_deg,re,im,abs)");
    harm->callback([&] {
        if (hti->count() > 0) harm_theta_in = harm_theta_in_raw;
        const Scenario scenario = load_scenario(resolve_scenario_path(harm_scenario));
        const ControlSchedule schedule = load_schedule(harm_schedule);
        if (schedule.group_count() != scenario.panel.group_count())
            throw Error("schedule has " + std::to_string(schedule.group_count()) +
                        " groups but the panel has " +
                        std::to_string(scenario.panel.group_count()));
        const double theta_in = harm_theta_in.value_or(scenario.geometry.theta1_deg);
        const auto spectrum =
            fourier_coefficients(schedule, scenario.panel.cell_model, harm_k_max);
        const auto grid = make_symmetric_theta_grid(89.75, harm_grid_deg);
        const auto map = harmonic_radiation(scenario.panel, spectrum, theta_in,
                                            scenario.geometry.f_hz, grid, -harm_k_max,
                                            harm_k_max);
        if (!harm_out.empty()) write_file_atomic(harm_out, radiation_map_csv(map));
        const auto dom = dominant_response(map);
        if (!dom) {
            out << "no signal: the map is identically zero\n";
        } else {
            out << "dominant response: k = " << dom->k
                << ", theta_out = " << detail::fmt("%.4f", dom->theta_deg) << " deg, f = "
                << detail::fmt("%.17g", map.f_hz + dom->k * map.f_m_hz) << " Hz, |amplitude| = "
                << detail::fmt("%.6e", std::abs(dom->amplitude)) << "\n";
        }
    });

    // --- roundtrip ----------------------------------------------------------
    auto* rt = app.add_subcommand(
        "roundtrip",
        "Double-bounce test of a modulated panel: angle and frequency after uplink + downlink");
    std::string rt_scenario, rt_schedule;
    std::optional<double> rt_theta1;
    double rt_theta1_raw = 0.0;
    int rt_k_max = 8, rt_time_steps = 8;
    double rt_grid_deg = 0.01, rt_fm_frac = 0.05, rt_beta_frac = 0.2;
    rt->add_option("--scenario", rt_scenario, "Scenario file or fixture id")->required();
    rt->add_option("--schedule", rt_schedule,
                   "Control schedule file (default: built-in travelling phase ramp)");
    auto* rtt = rt->add_option("--theta1", rt_theta1_raw,
                               "Initial incidence angle, degrees (default: scenario theta1)");
    rt->add_option("--k-max", rt_k_max, "Largest harmonic order searched")->default_val(8);
    rt->add_option("--grid-deg", rt_grid_deg, "Beam search grid step, degrees")
        ->default_val(0.01);
    rt->add_option("--fm-frac", rt_fm_frac,
                   "Built-in ramp: modulation frequency as a fraction of the carrier")
        ->default_val(0.05);
    rt->add_option("--beta-frac", rt_beta_frac,
                   "Built-in ramp: spatial phase gradient as a fraction of the carrier "
                   "wavenumber")
        ->default_val(0.2);
    rt->add_option("--time-steps", rt_time_steps, "Built-in ramp: phase dwells per period")
        ->default_val(8);
    rt->callback([&] {
        if (rtt->count() > 0) rt_theta1 = rt_theta1_raw;
        const Scenario scenario = load_scenario(resolve_scenario_path(rt_scenario));
        const double f1 = scenario.geometry.f_hz;
        const double theta1 = rt_theta1.value_or(scenario.geometry.theta1_deg);
        ControlSchedule schedule = [&] {
            if (!rt_schedule.empty()) return load_schedule(rt_schedule);
            const double kappa1 = 2.0 * std::numbers::pi * f1 / kSpeedOfLight;
            return make_phase_ramp_schedule(scenario.panel.group_centers_x(),
                                            scenario.panel.cell_model, 1.0 / (rt_fm_frac * f1),
                                            rt_time_steps, rt_beta_frac * kappa1);
        }();
        RoundTripOptions opts;
        opts.grid_step_deg = rt_grid_deg;
        opts.k_max = rt_k_max;
        const RoundTripResult r = round_trip_test(scenario.panel, schedule, theta1, f1, opts);
        out << "pass 1: k1 = " << r.k1 << ", theta2 = " << detail::fmt("%.4f", r.theta2_deg)
            << " deg, f2 = " << detail::fmt("%.17g", r.f2_hz) << " Hz\n";
        out << "pass 2: k2 = " << r.k2 << ", theta3 = " << detail::fmt("%.4f", r.theta3_deg)
            << " deg, f3 = " << detail::fmt("%.17g", r.f3_hz) << " Hz\n";
        out << "momentum ledger: lhs = " << detail::fmt("%.6f", r.ledger.lhs)
            << " rad/m, rhs = " << detail::fmt("%.6f", r.ledger.rhs)
            << " rad/m (beta_s = " << detail::fmt("%.6f", r.ledger.beta_s_rad_per_m)
            << " rad/m) -> " << (r.ledger.balanced ? "balanced" : "NOT balanced") << "\n";
        out << "reciprocal: " << (r.reciprocal ? "true" : "false") << "\n";
    });

    // --- nonlinear ---------------------------------------------------------
    auto* nl = app.add_subcommand(
        "nonlinear", "Power-dependent forward/reverse transmission of the asymmetric cell");
    double nl_t_max = 0.9, nl_c_fwd = 0.01, nl_c_rev = 100.0, nl_exponent = 2.0,
           nl_p_ref = 1e-3;
    double nl_p_min = 0.0, nl_p_max = 1e-2;
    int nl_steps = 11;
    std::string nl_out;
    nl->add_option("--t-max", nl_t_max, "Zero-power transmission amplitude")->default_val(0.9);
    nl->add_option("--c-fwd", nl_c_fwd, "Forward (downlink) coupling")->default_val(0.01);
    nl->add_option("--c-rev", nl_c_rev, "Reverse (uplink) coupling")->default_val(100.0);
    nl->add_option("--exponent", nl_exponent, "Saturation exponent")->default_val(2.0);
    nl->add_option("--p-ref-w", nl_p_ref, "Reference power, watts")->default_val(1e-3);
    nl->add_option("--p-min-w", nl_p_min, "Sweep start power, watts")->default_val(0.0);
    nl->add_option("--p-max-w", nl_p_max, "Sweep end power, watts")->default_val(1e-2);
    nl->add_option("--steps", nl_steps, "Sweep points")->default_val(11);
    nl->add_option("--out", nl_out, "CSV output (p_w,forward,reverse)");
    nl->callback([&] {
        if (nl_steps < 2) throw Error("nonlinear: need at least 2 sweep points");
        const auto model =
            ReflectionModel::nonlinear_cell(nl_t_max, nl_c_fwd, nl_c_rev, nl_exponent, nl_p_ref);
        const auto& cell = *model.get_if<NonlinearCell>();
        std::ostringstream csv;
        csv << "p_w,forward,reverse\n";
        out << "P_in (W)        forward     reverse\n";
        for (int i = 0; i < nl_steps; ++i) {
            const double p = nl_p_min + (nl_p_max - nl_p_min) * i / (nl_steps - 1);
            const double fwd = nonlinear_transmission(cell, Direction::Downlink, p);
            const double rev = nonlinear_transmission(cell, Direction::Uplink, p);
            csv << detail::fmt("%.17g", p) << ',' << detail::fmt("%.17g", fwd) << ','
                << detail::fmt("%.17g", rev) << "\n";
            out << detail::fmt("%-15.6e", p) << " " << detail::fmt("%-11.6f", fwd) << " "
                << detail::fmt("%.6e", rev) << "\n";
        }
        if (!nl_out.empty()) write_file_atomic(nl_out, csv.str());
    });

    // --- optimize ------------------------------------------------------------
    auto* opt = app.add_subcommand("optimize",
                                   "Search a coding pattern that maximizes received power");
    std::string opt_scenario, opt_mode = "auto", opt_out;
    opt->add_option("--scenario", opt_scenario, "Scenario file or fixture id")->required();
    opt->add_option("--mode", opt_mode, "continuous | exhaustive | greedy | auto")
        ->default_val("auto");
    opt->add_option("--out", opt_out, "JSON output (mode, values, gain_db)");
    opt->callback([&] {
        const Scenario scenario = load_scenario(resolve_scenario_path(opt_scenario));
        OptimizeMode mode;
        if (opt_mode == "auto")
            mode = is_binary_model(scenario.panel.cell_model) ? OptimizeMode::ExhaustiveBits
                                                              : OptimizeMode::ContinuousAlign;
        else if (opt_mode == "continuous")
            mode = OptimizeMode::ContinuousAlign;
        else if (opt_mode == "exhaustive")
            mode = OptimizeMode::ExhaustiveBits;
        else if (opt_mode == "greedy")
            mode = OptimizeMode::GreedyBits;
        else
            throw Error("unknown mode '" + opt_mode + "'");
        const OptimizeResult result = optimize_pattern(scenario, mode);
        out << "mode: " << to_string(mode) << "\n";
        out << "pattern:";
        for (const double v : result.pattern.values) out << " " << detail::fmt("%.6g", v);
        out << "\n";
        out << "gain over identical: " << detail::fmt("%.6f", result.gain_db) << " dB\n";
        if (!opt_out.empty()) {
            nlohmann::ordered_json doc;
            doc["mode"] = to_string(mode);
            doc["values"] = result.pattern.values;
            doc["gain_db"] = result.gain_db;
            write_file_atomic(opt_out, doc.dump(2) + "\n");
        }
    });

    // --- parse + dispatch -----------------------------------------------------
    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.push_back("rissim");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(argv_store.size());
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace rissim::cli
