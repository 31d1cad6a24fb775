#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rissim/experiments.hpp"
#include "rissim/harmonics.hpp"
#include "rissim/schedule.hpp"

namespace rissim {

// ---------------------------------------------------------------------------
// Generic sectioned key-value files
//
//   # comment
//   key = value            (global section "")
//   [section name]
//   key = value
//
// Duplicate keys are preserved in order; loaders decide what repetition means.
// ---------------------------------------------------------------------------

struct KvEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct KvSection {
    std::string name;
    std::vector<KvEntry> entries;
    int line = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

inline std::string location(const std::string& source, int line) {
    return source + ":" + std::to_string(line);
}

}  // namespace detail

inline std::vector<KvSection> parse_kv_text(const std::string& text, const std::string& source) {
    std::vector<KvSection> sections;
    sections.push_back({"", {}, 0});
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(detail::location(source, line_no) + ": unterminated section header");
            sections.push_back({detail::trim(line.substr(1, line.size() - 2)), {}, line_no});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(detail::location(source, line_no) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError(detail::location(source, line_no) + ": empty key");
        sections.back().entries.push_back({key, value, line_no});
    }
    return sections;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline std::vector<KvSection> parse_kv_file(const std::filesystem::path& path) {
    return parse_kv_text(read_text_file(path), path.filename().string());
}

namespace detail {

inline double parse_double(const KvEntry& e, const std::string& source) {
    const char* begin = e.value.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || trim(end) != "")
        throw ParseError(location(source, e.line) + ": '" + e.key + "' is not a number: '" +
                         e.value + "'");
    return value;
}

inline int parse_int(const KvEntry& e, const std::string& source) {
    const double d = parse_double(e, source);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw ParseError(location(source, e.line) + ": '" + e.key + "' must be an integer");
    return i;
}

inline bool parse_bool(const KvEntry& e, const std::string& source) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    throw ParseError(location(source, e.line) + ": '" + e.key + "' must be true or false");
}

inline std::vector<double> parse_double_list(const KvEntry& e, const std::string& source) {
    std::vector<double> values;
    std::istringstream in(e.value);
    std::string token;
    while (std::getline(in, token, ',')) {
        token = trim(token);
        if (token.empty())
            throw ParseError(location(source, e.line) + ": '" + e.key + "' has an empty entry");
        KvEntry fake{e.key, token, e.line};
        values.push_back(parse_double(fake, source));
    }
    if (values.empty())
        throw ParseError(location(source, e.line) + ": '" + e.key + "' is empty");
    return values;
}

/// Single-valued access with unknown-key rejection.
class SectionReader {
  public:
    SectionReader(const KvSection& section, std::string source)
        : section_(section), source_(std::move(source)) {}

    const KvEntry* find(const std::string& key) const {
        const KvEntry* hit = nullptr;
        for (const auto& e : section_.entries) {
            if (e.key != key) continue;
            if (hit)
                throw ParseError(location(source_, e.line) + ": duplicate key '" + key + "'");
            hit = &e;
        }
        if (hit) seen_.insert(key);
        return hit;
    }

    const KvEntry& require(const std::string& key) const {
        const KvEntry* e = find(key);
        if (!e)
            throw ParseError(source_ + ": section [" + section_.name + "] is missing '" + key +
                             "'");
        return *e;
    }

    double number(const std::string& key) const { return parse_double(require(key), source_); }
    double number_or(const std::string& key, double fallback) const {
        const KvEntry* e = find(key);
        return e ? parse_double(*e, source_) : fallback;
    }
    int integer(const std::string& key) const { return parse_int(require(key), source_); }
    std::string text(const std::string& key) const { return require(key).value; }
    bool flag_or(const std::string& key, bool fallback) const {
        const KvEntry* e = find(key);
        return e ? parse_bool(*e, source_) : fallback;
    }

    void reject_unknown() const {
        for (const auto& e : section_.entries)
            if (!seen_.count(e.key))
                throw ParseError(location(source_, e.line) + ": unknown key '" + e.key +
                                 "' in section [" + section_.name + "]");
    }

  private:
    const KvSection& section_;
    std::string source_;
    mutable std::set<std::string> seen_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Varactor response tables:  voltage_V, magnitude, phase_deg  (CSV, header row)
// ---------------------------------------------------------------------------

inline std::vector<VaractorTableSample> load_varactor_table(const std::filesystem::path& path) {
    const std::string source = path.filename().string();
    std::istringstream in(read_text_file(path));
    std::string line;
    int line_no = 0;
    std::vector<VaractorTableSample> samples;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (!header_seen) {
            std::string squashed;
            for (char c : t)
                if (c != ' ' && c != '\t') squashed += c;
            if (squashed != "voltage_V,magnitude,phase_deg")
                throw ParseError(detail::location(source, line_no) +
                                 ": expected header 'voltage_V,magnitude,phase_deg'");
            header_seen = true;
            continue;
        }
        KvEntry row{"row", t, line_no};
        const auto values = detail::parse_double_list(row, source);
        if (values.size() != 3)
            throw ParseError(detail::location(source, line_no) + ": expected 3 columns");
        samples.push_back({values[0], values[1], values[2]});
    }
    if (!header_seen) throw ParseError(source + ": missing header row");
    if (samples.empty()) throw ParseError(source + ": table has no samples");
    return samples;
}

// ---------------------------------------------------------------------------
// Scenario files
// ---------------------------------------------------------------------------

namespace detail {

inline ReflectionModel load_model(const std::string& name,
                                  const std::map<std::string, const KvSection*>& model_sections,
                                  const std::string& source,
                                  const std::filesystem::path& base_dir, int depth) {
    if (depth > 8) throw ParseError(source + ": model references nest too deeply");
    const auto it = model_sections.find(name);
    if (it == model_sections.end())
        throw ParseError(source + ": no [model " + name + "] section");
    SectionReader r(*it->second, source);
    const std::string type = r.text("type");
    if (type == "ideal_varactor") {
        auto m = ReflectionModel::ideal_varactor(r.number("v_min_v"), r.number("v_max_v"),
                                                 r.number("phase_span_deg"), r.number("magnitude"));
        r.reject_unknown();
        return m;
    }
    if (type == "table_varactor") {
        std::vector<VaractorTableSample> samples;
        if (const KvEntry* file = r.find("table_file")) {
            samples = load_varactor_table(base_dir / file->value);
        } else if (const KvEntry* inline_rows = r.find("samples")) {
            std::istringstream rows(inline_rows->value);
            std::string row;
            while (std::getline(rows, row, ';')) {
                KvEntry fake{"samples", trim(row), inline_rows->line};
                const auto v = parse_double_list(fake, source);
                if (v.size() != 3)
                    throw ParseError(location(source, inline_rows->line) +
                                     ": each sample needs 'voltage,magnitude,phase'");
                samples.push_back({v[0], v[1], v[2]});
            }
        } else {
            throw ParseError(source + ": [model " + name +
                             "] needs 'table_file' or inline 'samples'");
        }
        r.reject_unknown();
        return ReflectionModel::table_varactor(std::move(samples));
    }
    if (type == "ideal_pin") {
        auto m = ReflectionModel::ideal_pin(r.number("phase0_deg"), r.number("phase1_deg"),
                                            r.number("magnitude"));
        r.reject_unknown();
        return m;
    }
    if (type == "active") {
        const std::string state = r.text("state");
        ActiveState s;
        if (state == "bidirectional")
            s = ActiveState::Bidirectional;
        else if (state == "forward_only")
            s = ActiveState::ForwardOnly;
        else if (state == "backward_only")
            s = ActiveState::BackwardOnly;
        else if (state == "off")
            s = ActiveState::Off;
        else
            throw ParseError(source + ": unknown active state '" + state + "'");
        auto m = ReflectionModel::active_cell(s, r.number("gain_db"), r.number("isolation_db"));
        r.reject_unknown();
        return m;
    }
    if (type == "nonlinear") {
        auto m = ReflectionModel::nonlinear_cell(r.number("t_max"), r.number("c_fwd"),
                                                 r.number("c_rev"), r.number("exponent"),
                                                 r.number("p_ref_w"));
        r.reject_unknown();
        return m;
    }
    if (type == "angle_dependent") {
        const double q = r.number("q");
        const std::string base = r.text("base");
        r.reject_unknown();
        if (base == name) throw ParseError(source + ": model '" + name + "' references itself");
        return ReflectionModel::angle_dependent(
            load_model(base, model_sections, source, base_dir, depth + 1), q);
    }
    throw ParseError(source + ": unknown model type '" + type + "'");
}

}  // namespace detail

inline Scenario load_scenario(const std::filesystem::path& path) {
    const std::string source = path.filename().string();
    const auto sections = parse_kv_text(read_text_file(path), source);
    const std::filesystem::path base_dir = path.has_parent_path()
                                               ? path.parent_path()
                                               : std::filesystem::path(".");

    const KvSection* geometry_section = nullptr;
    const KvSection* panel_section = nullptr;
    const KvSection* pattern_section = nullptr;
    const KvSection* direct_section = nullptr;
    std::map<std::string, const KvSection*> model_sections;

    for (std::size_t i = 1; i < sections.size(); ++i) {
        const KvSection& s = sections[i];
        if (s.name == "geometry")
            geometry_section = &s;
        else if (s.name == "panel")
            panel_section = &s;
        else if (s.name == "pattern")
            pattern_section = &s;
        else if (s.name == "direct_link")
            direct_section = &s;
        else if (s.name.rfind("model ", 0) == 0)
            model_sections[detail::trim(s.name.substr(6))] = &s;
        else
            throw ParseError(detail::location(source, s.line) + ": unknown section [" + s.name +
                             "]");
    }

    Scenario scenario;
    {
        detail::SectionReader global(sections[0], source);
        scenario.id = global.text("id");
        scenario.report_phase = global.flag_or("report_phase", true);
        global.reject_unknown();
    }
    if (!geometry_section) throw ParseError(source + ": missing [geometry] section");
    {
        detail::SectionReader g(*geometry_section, source);
        scenario.geometry.d1_m = g.number("d1_m");
        scenario.geometry.theta1_deg = g.number("theta1_deg");
        scenario.geometry.d2_m = g.number("d2_m");
        scenario.geometry.theta2_deg = g.number("theta2_deg");
        scenario.geometry.f_hz = g.number("f_hz");
        scenario.geometry.pt_dbm = g.number_or("pt_dbm", 0.0);
        g.reject_unknown();
        scenario.geometry.validate();
    }

    // Panel defaults: 8x8, half-wavelength spacing at the carrier, pairs of
    // columns per super-column, full-span ideal varactor cells.
    int rows = 8, cols = 8, group_cols = 2;
    double dx = 0.5 * wavelength_m(scenario.geometry.f_hz);
    double dy = dx;
    ReflectionModel model = ReflectionModel::ideal_varactor(0.0, 21.0, 360.0, 1.0);
    if (panel_section) {
        detail::SectionReader p(*panel_section, source);
        rows = p.integer("rows");
        cols = p.integer("cols");
        dx = p.number("dx_m");
        dy = p.number("dy_m");
        group_cols = p.integer("group_cols");
        model = detail::load_model(p.text("model"), model_sections, source, base_dir, 0);
        p.reject_unknown();
    } else if (!model_sections.empty()) {
        throw ParseError(source + ": model sections present but no [panel] references them");
    }
    scenario.panel = build_panel(rows, cols, dx, dy, group_cols, std::move(model));

    if (pattern_section) {
        detail::SectionReader p(*pattern_section, source);
        const std::string kind = p.text("kind");
        if (kind == "identical") {
            scenario.pattern_kind = PatternKind::Identical;
            scenario.pattern_params.value = p.number("value");
        } else if (kind == "gradient") {
            scenario.pattern_kind = PatternKind::Gradient;
            scenario.pattern_params.delta_phase_deg = p.number("delta_phase_deg");
        } else if (kind == "stripe") {
            scenario.pattern_kind = PatternKind::Stripe;
        } else if (kind == "custom") {
            scenario.pattern_kind = PatternKind::Custom;
            scenario.pattern_params.values = detail::parse_double_list(p.require("values"), source);
        } else {
            throw ParseError(source + ": unknown pattern kind '" + kind + "'");
        }
        p.reject_unknown();
    } else {
        scenario.pattern_kind = PatternKind::Identical;
        scenario.pattern_params.value = control_range(scenario.panel.cell_model).first;
    }

    if (direct_section) {
        detail::SectionReader d(*direct_section, source);
        const std::string type = d.text("type");
        if (type == "none")
            scenario.direct = DirectLink::none();
        else if (type == "free_space")
            scenario.direct = DirectLink::free_space();
        else if (type == "fixed")
            scenario.direct = DirectLink::fixed({d.number("re"), d.number("im")});
        else
            throw ParseError(source + ": unknown direct link type '" + type + "'");
        d.reject_unknown();
    }

    // Fail fast on pattern/model mismatches.
    make_pattern(scenario.pattern_kind, scenario.panel, scenario.pattern_params);
    return scenario;
}

namespace detail {

inline std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_model(std::ostringstream& out, const std::string& name,
                        const ReflectionModel& model) {
    out << "[model " << name << "]\n";
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, IdealVaractor>) {
                out << "type = ideal_varactor\n"
                    << "v_min_v = " << fmt_g17(m.v_min_v) << "\n"
                    << "v_max_v = " << fmt_g17(m.v_max_v) << "\n"
                    << "phase_span_deg = " << fmt_g17(m.phase_span_deg) << "\n"
                    << "magnitude = " << fmt_g17(m.magnitude) << "\n";
            } else if constexpr (std::is_same_v<T, TableVaractor>) {
                out << "type = table_varactor\n"
                    << "samples = ";
                for (std::size_t i = 0; i < m.samples.size(); ++i) {
                    if (i) out << "; ";
                    out << fmt_g17(m.samples[i].voltage_v) << ", "
                        << fmt_g17(m.samples[i].magnitude) << ", "
                        << fmt_g17(m.samples[i].phase_deg);
                }
                out << "\n";
            } else if constexpr (std::is_same_v<T, IdealPin>) {
                out << "type = ideal_pin\n"
                    << "phase0_deg = " << fmt_g17(m.phase_state_0_deg) << "\n"
                    << "phase1_deg = " << fmt_g17(m.phase_state_1_deg) << "\n"
                    << "magnitude = " << fmt_g17(m.magnitude) << "\n";
            } else if constexpr (std::is_same_v<T, ActiveCell>) {
                out << "type = active\n"
                    << "state = " << to_string(m.state) << "\n"
                    << "gain_db = " << fmt_g17(m.gain_db) << "\n"
                    << "isolation_db = " << fmt_g17(m.isolation_db) << "\n";
            } else if constexpr (std::is_same_v<T, NonlinearCell>) {
                out << "type = nonlinear\n"
                    << "t_max = " << fmt_g17(m.t_max) << "\n"
                    << "c_fwd = " << fmt_g17(m.c_fwd) << "\n"
                    << "c_rev = " << fmt_g17(m.c_rev) << "\n"
                    << "exponent = " << fmt_g17(m.exponent) << "\n"
                    << "p_ref_w = " << fmt_g17(m.p_ref_w) << "\n";
            } else {
                out << "type = angle_dependent\n"
                    << "q = " << fmt_g17(m.q) << "\n"
                    << "base = " << name << "_base\n";
            }
        },
        model.variant());
    out << "\n";
    if (const auto* a = model.get_if<AngleDependent>())
        write_model(out, name + "_base", *a->base);
}

}  // namespace detail

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path dir =
        path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    if (!std::filesystem::exists(dir))
        throw Error("output directory does not exist: " + dir.string());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "id = " << scenario.id << "\n";
    out << "report_phase = " << (scenario.report_phase ? "true" : "false") << "\n\n";
    out << "[geometry]\n"
        << "d1_m = " << detail::fmt_g17(scenario.geometry.d1_m) << "\n"
        << "theta1_deg = " << detail::fmt_g17(scenario.geometry.theta1_deg) << "\n"
        << "d2_m = " << detail::fmt_g17(scenario.geometry.d2_m) << "\n"
        << "theta2_deg = " << detail::fmt_g17(scenario.geometry.theta2_deg) << "\n"
        << "f_hz = " << detail::fmt_g17(scenario.geometry.f_hz) << "\n"
        << "pt_dbm = " << detail::fmt_g17(scenario.geometry.pt_dbm) << "\n\n";
    detail::write_model(out, "cell", scenario.panel.cell_model);
    out << "[panel]\n"
        << "rows = " << scenario.panel.rows << "\n"
        << "cols = " << scenario.panel.cols << "\n"
        << "dx_m = " << detail::fmt_g17(scenario.panel.dx_m) << "\n"
        << "dy_m = " << detail::fmt_g17(scenario.panel.dy_m) << "\n"
        << "group_cols = " << scenario.panel.group_cols << "\n"
        << "model = cell\n\n";
    out << "[pattern]\n";
    switch (scenario.pattern_kind) {
        case PatternKind::Identical:
            out << "kind = identical\n"
                << "value = " << detail::fmt_g17(scenario.pattern_params.value) << "\n";
            break;
        case PatternKind::Gradient:
            out << "kind = gradient\n"
                << "delta_phase_deg = " << detail::fmt_g17(scenario.pattern_params.delta_phase_deg)
                << "\n";
            break;
        case PatternKind::Stripe:
            out << "kind = stripe\n";
            break;
        case PatternKind::Custom: {
            out << "kind = custom\n"
                << "values = ";
            for (std::size_t i = 0; i < scenario.pattern_params.values.size(); ++i) {
                if (i) out << ", ";
                out << detail::fmt_g17(scenario.pattern_params.values[i]);
            }
            out << "\n";
            break;
        }
    }
    out << "\n[direct_link]\n"
        << "type = " << to_string(scenario.direct.kind) << "\n";
    if (scenario.direct.kind == DirectLink::Kind::FixedComplex)
        out << "re = " << detail::fmt_g17(scenario.direct.value.real()) << "\n"
            << "im = " << detail::fmt_g17(scenario.direct.value.imag()) << "\n";
    write_file_atomic(path, out.str());
}

// ---------------------------------------------------------------------------
// Schedule files:  T0_s plus one 'seg = group, start_frac, end_frac, value'
// line per dwell.
// ---------------------------------------------------------------------------

inline ControlSchedule load_schedule(const std::filesystem::path& path) {
    const std::string source = path.filename().string();
    const auto sections = parse_kv_text(read_text_file(path), source);
    if (sections.size() > 1)
        throw ParseError(source + ": schedule files have no sections");

    std::optional<double> period;
    std::vector<std::vector<ScheduleSegment>> groups;
    for (const KvEntry& e : sections[0].entries) {
        if (e.key == "T0_s") {
            if (period)
                throw ParseError(detail::location(source, e.line) + ": duplicate T0_s");
            period = detail::parse_double(e, source);
        } else if (e.key == "seg") {
            const auto v = detail::parse_double_list(e, source);
            if (v.size() != 4)
                throw ParseError(detail::location(source, e.line) +
                                 ": 'seg' needs 'group, start_frac, end_frac, value'");
            const int g = static_cast<int>(v[0]);
            if (static_cast<double>(g) != v[0] || g < 0)
                throw ParseError(detail::location(source, e.line) +
                                 ": group index must be a non-negative integer");
            if (static_cast<int>(groups.size()) <= g) groups.resize(g + 1);
            groups[g].push_back({v[1], v[2], v[3]});
        } else {
            throw ParseError(detail::location(source, e.line) + ": unknown key '" + e.key + "'");
        }
    }
    if (!period) throw ParseError(source + ": missing T0_s");
    try {
        return ControlSchedule::make(*period, std::move(groups));
    } catch (const ScheduleError& e) {
        throw ParseError(source + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Report and trajectory emission (CSV + JSON mirrors, atomic writes)
// ---------------------------------------------------------------------------

inline std::string report_csv(const std::vector<ReportRow>& rows) {
    if (rows.empty()) throw Error("report: no rows to write");
    std::ostringstream out;
    out << "scenario,pattern,p_up_dbm,p_down_dbm,phase_up_deg,phase_down_deg\n";
    for (const auto& r : rows) {
        out << r.scenario << ',' << r.pattern << ',' << detail::fmt_g17(r.p_up_dbm) << ','
            << detail::fmt_g17(r.p_down_dbm) << ',';
        if (r.phase_na)
            out << "NA,NA\n";
        else
            out << detail::fmt_g17(r.phase_up_deg) << ',' << detail::fmt_g17(r.phase_down_deg)
                << "\n";
    }
    return out.str();
}

inline std::string report_json(const std::vector<ReportRow>& rows) {
    if (rows.empty()) throw Error("report: no rows to write");
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["scenario"] = r.scenario;
        row["pattern"] = r.pattern;
        row["p_up_dbm"] = r.p_up_dbm;
        row["p_down_dbm"] = r.p_down_dbm;
        if (r.phase_na) {
            row["phase_up_deg"] = "NA";
            row["phase_down_deg"] = "NA";
        } else {
            row["phase_up_deg"] = r.phase_up_deg;
            row["phase_down_deg"] = r.phase_down_deg;
        }
        doc.push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

inline void save_report_csv(const std::vector<ReportRow>& rows,
                            const std::filesystem::path& path) {
    write_file_atomic(path, report_csv(rows));
}

inline void save_report_json(const std::vector<ReportRow>& rows,
                             const std::filesystem::path& path) {
    write_file_atomic(path, report_json(rows));
}

inline std::string trajectory_csv(const std::vector<TrajectoryPoint>& trajectory) {
    if (trajectory.empty()) throw Error("trajectory: no points to write");
    std::ostringstream out;
    out << "voltage_v,re_up,im_up,re_down,im_down\n";
    for (const auto& p : trajectory)
        out << detail::fmt_g17(p.voltage_v) << ',' << detail::fmt_g17(p.h_up.real()) << ','
            << detail::fmt_g17(p.h_up.imag()) << ',' << detail::fmt_g17(p.h_down.real()) << ','
            << detail::fmt_g17(p.h_down.imag()) << "\n";
    return out.str();
}

inline std::string trajectory_json(const std::vector<TrajectoryPoint>& trajectory) {
    if (trajectory.empty()) throw Error("trajectory: no points to write");
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& p : trajectory) {
        nlohmann::ordered_json row;
        row["voltage_v"] = p.voltage_v;
        row["re_up"] = p.h_up.real();
        row["im_up"] = p.h_up.imag();
        row["re_down"] = p.h_down.real();
        row["im_down"] = p.h_down.imag();
        doc.push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

inline void save_trajectory_csv(const std::vector<TrajectoryPoint>& trajectory,
                                const std::filesystem::path& path) {
    write_file_atomic(path, trajectory_csv(trajectory));
}

inline void save_trajectory_json(const std::vector<TrajectoryPoint>& trajectory,
                                 const std::filesystem::path& path) {
    write_file_atomic(path, trajectory_json(trajectory));
}

inline std::string radiation_map_csv(const RadiationMap& map) {
    if (map.ks.empty() || map.theta_deg.empty()) throw Error("radiation map: nothing to write");
    std::ostringstream out;
    out << "k,theta_deg,re,im,abs\n";
    for (std::size_t ki = 0; ki < map.ks.size(); ++ki)
        for (std::size_t ti = 0; ti < map.theta_deg.size(); ++ti) {
            const cdouble a = map.at(ki, ti);
            out << map.ks[ki] << ',' << detail::fmt_g17(map.theta_deg[ti]) << ','
                << detail::fmt_g17(a.real()) << ',' << detail::fmt_g17(a.imag()) << ','
                << detail::fmt_g17(std::abs(a)) << "\n";
        }
    return out.str();
}

// ---------------------------------------------------------------------------
// Human-readable rendering (quantized to measurement-sheet precision:
// 0.1 dB for powers and deviations, whole degrees for phases)
// ---------------------------------------------------------------------------

inline std::string render_dbm(double dbm) {
    if (std::isinf(dbm) && dbm < 0.0) return "below floor";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", dbm);
    return buf;
}

inline std::string render_phase_deg(double deg) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", deg);
    return buf;
}

inline std::string render_report_table(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << "scenario    pattern     P_rx up/down (dBm)    phase up/down (deg)\n";
    for (const auto& r : rows) {
        char line[160];
        const std::string power = render_dbm(r.p_up_dbm) + " / " + render_dbm(r.p_down_dbm);
        const std::string phase =
            r.phase_na ? "NA"
                       : render_phase_deg(r.phase_up_deg) + " / " +
                             render_phase_deg(r.phase_down_deg);
        std::snprintf(line, sizeof(line), "%-11s %-11s %-21s %s\n", r.scenario.c_str(),
                      r.pattern.c_str(), power.c_str(), phase.c_str());
        out << line;
    }
    return out.str();
}

inline std::string render_reciprocity(const ReciprocityReport& rep) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "deviation %.6f dB / %.6f deg -> verdict: %s",
                  rep.magnitude_deviation_db, rep.phase_deviation_deg,
                  rep.reciprocal ? "Reciprocal" : "Nonreciprocal");
    return buf;
}

}  // namespace rissim
