// scenario.hpp: INI scenario files, steady/sweep/scan drivers and CSV output.
//
// Config sections:
//   [system]       frequency_unit, temperature_unit, omega_C, omega_H, g, gamma,
//                  unit_scale, allow_degenerate
//   [temperatures] T_H, T_R, T_C
//   [filter]       H, R, C  (e.g. "3", "1,2", "none", "all"; default all)
//   [background]   mode = none|vacuum|thermal, T0, gamma_B
//   [sweep]        variable = T_H|T_R|T_C|T0, start, stop, points, spacing = linear|log
//   [scan]         mode = single_channel|all
//
// With frequency_unit = GHz every frequency and rate is an ordinary frequency
// in GHz (w = 2 pi f) and unit_scale defaults to omega_C in rad/s, so that
// omega_C = 1 internally. temperature_unit = K converts through k_B / hbar.

#pragma once

#include "qfridge/thermo.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qfridge {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ScanMode { SingleChannel, All };

inline std::string_view to_string(ScanMode m) { return m == ScanMode::All ? "all" : "single_channel"; }

inline ScanMode scan_mode_from_string(const std::string& s) {
    if (s == "single_channel") return ScanMode::SingleChannel;
    if (s == "all") return ScanMode::All;
    throw ConfigError("scan mode must be single_channel or all, got '" + s + "'");
}

struct SweepSpec {
    std::string variable{"T_H"};
    double start{0.0};
    double stop{0.0};
    std::size_t points{0};
    bool log_spacing{false};

    std::vector<double> grid() const {
        std::vector<double> v(points);
        for (std::size_t i = 0; i < points; ++i) {
            const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
            v[i] = log_spacing ? start * std::pow(stop / start, f) : start + (stop - start) * f;
        }
        if (points > 1) v.back() = stop;
        return v;
    }
};

// Values are stored as written, in the declared units.
struct ScenarioConfig {
    std::string frequency_unit{"natural"};
    std::string temperature_unit{"natural"};
    double omega_C{1.0};
    double omega_H{3.0};
    std::optional<double> g;  // absent: inferred as 9/17 omega_C
    double gamma{0.1};
    std::optional<double> unit_scale;
    bool allow_degenerate{false};

    double T_H{0.0}, T_R{0.0}, T_C{0.0};
    FilterConfig filter{FilterConfig::all()};

    BackgroundSpec::Mode background_mode{BackgroundSpec::Mode::None};
    double T0{0.0};
    double gamma_B{0.0};

    std::optional<SweepSpec> sweep;
    ScanMode scan_mode{ScanMode::SingleChannel};

    std::vector<std::string> warnings;

    bool ghz() const { return frequency_unit == "GHz"; }
    bool kelvin() const { return temperature_unit == "K"; }
    double g_declared() const { return g.value_or(9.0 / 17.0 * omega_C); }

    double scale() const {
        if (unit_scale) return *unit_scale;
        return ghz() ? units::rad_per_s_per_GHz * omega_C : 1.0;
    }
    double to_natural_frequency(double w) const { return ghz() ? units::frequency_from_GHz(w, scale()) : w; }
    double to_natural_temperature(double T) const { return kelvin() ? units::temperature_from_K(T, scale()) : T; }

    SystemParams params() const {
        return SystemParams::make(to_natural_frequency(omega_C), to_natural_frequency(omega_H),
                                  to_natural_frequency(g_declared()), to_natural_frequency(gamma), scale(),
                                  allow_degenerate);
    }
    Temperatures temperatures() const {
        return {to_natural_temperature(T_H), to_natural_temperature(T_R), to_natural_temperature(T_C)};
    }
    BackgroundSpec background() const {
        switch (background_mode) {
            case BackgroundSpec::Mode::None: return BackgroundSpec::none();
            case BackgroundSpec::Mode::Vacuum: return BackgroundSpec::vacuum(to_natural_frequency(gamma_B));
            case BackgroundSpec::Mode::Thermal:
                return BackgroundSpec::thermal(to_natural_temperature(T0), to_natural_frequency(gamma_B));
        }
        return {};
    }

    // Copy with the sweep variable set to v (declared units).
    ScenarioConfig with_value(const std::string& variable, double v) const {
        ScenarioConfig c = *this;
        if (variable == "T_H") c.T_H = v;
        else if (variable == "T_R") c.T_R = v;
        else if (variable == "T_C") c.T_C = v;
        else if (variable == "T0") c.T0 = v;
        else throw ConfigError("unknown sweep variable '" + variable + "'");
        return c;
    }
};

// ------------------------------- parsing -------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// "section.key" -> line number, for diagnostics.
inline std::map<std::string, int> key_lines(const std::string& text) {
    std::map<std::string, int> out;
    std::istringstream in(text);
    std::string line, section;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string t = trim(line);
        if (t.empty() || t[0] == ';' || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq != std::string::npos) out.emplace(section + "." + trim(t.substr(0, eq)), n);
    }
    return out;
}

class FieldReader {
public:
    FieldReader(const boost::property_tree::ptree& pt, std::map<std::string, int> lines, std::string source)
        : pt_(pt), lines_(std::move(lines)), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
        std::ostringstream os;
        os << source_;
        if (auto it = lines_.find(path); it != lines_.end()) os << ":" << it->second;
        os << ": [" << path.substr(0, path.find('.')) << "] " << path.substr(path.find('.') + 1) << ": " << msg;
        throw ConfigError(os.str());
    }

    std::optional<std::string> text(const std::string& path) const {
        if (auto v = pt_.get_optional<std::string>(path)) return trim(*v);
        return std::nullopt;
    }

    std::optional<double> number(const std::string& path) const {
        const auto t = text(path);
        if (!t) return std::nullopt;
        try {
            std::size_t used = 0;
            const double v = std::stod(*t, &used);
            if (used != t->size()) throw std::invalid_argument("trailing characters");
            if (!std::isfinite(v)) fail(path, "value must be finite");
            return v;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            fail(path, "expected a number, got '" + *t + "'");
        }
    }

    double required(const std::string& path) const {
        if (auto v = number(path)) return *v;
        fail(path, "missing required value");
    }

    std::optional<bool> boolean(const std::string& path) const {
        const auto t = text(path);
        if (!t) return std::nullopt;
        if (*t == "true" || *t == "1" || *t == "yes") return true;
        if (*t == "false" || *t == "0" || *t == "no") return false;
        fail(path, "expected true or false, got '" + *t + "'");
    }

    void reject_unknown(const std::map<std::string, std::set<std::string>>& allowed) const {
        for (const auto& [section, body] : pt_) {
            auto it = allowed.find(section);
            if (it == allowed.end()) {
                std::ostringstream os;
                os << source_ << ": unknown section [" << section << "]";
                throw ConfigError(os.str());
            }
            for (const auto& [key, _] : body)
                if (!it->second.count(key)) fail(section + "." + key, "unknown key");
        }
    }

private:
    const boost::property_tree::ptree& pt_;
    std::map<std::string, int> lines_;
    std::string source_;
};

inline std::bitset<3> parse_mask(const FieldReader& r, const std::string& path, const std::string& v) {
    if (v == "all") return std::bitset<3>("111");
    if (v == "none" || v.empty()) return {};
    std::bitset<3> m;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item != "1" && item != "2" && item != "3") r.fail(path, "channel '" + item + "' does not exist (use 1, 2, 3)");
        m.set(static_cast<std::size_t>(item[0] - '1'));
    }
    return m;
}

inline std::string mask_text(std::bitset<3> m) {
    if (m.none()) return "none";
    std::string s;
    for (std::size_t j = 0; j < 3; ++j)
        if (m.test(j)) s += (s.empty() ? "" : ",") + std::to_string(j + 1);
    return s;
}

inline std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline ScenarioConfig parse_config(const std::string& text, const std::string& source = "<config>") {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        std::ostringstream os;
        os << source << ":" << e.line() << ": " << e.message();
        throw ConfigError(os.str());
    }
    const detail::FieldReader r(tree, detail::key_lines(text), source);
    r.reject_unknown({
        {"system",
         {"frequency_unit", "temperature_unit", "omega_C", "omega_H", "g", "gamma", "unit_scale", "allow_degenerate"}},
        {"temperatures", {"T_H", "T_R", "T_C"}},
        {"filter", {"H", "R", "C"}},
        {"background", {"mode", "T0", "gamma_B"}},
        {"sweep", {"variable", "start", "stop", "points", "spacing"}},
        {"scan", {"mode"}},
    });

    ScenarioConfig c;
    c.frequency_unit = r.text("system.frequency_unit").value_or("natural");
    if (c.frequency_unit != "natural" && c.frequency_unit != "GHz")
        r.fail("system.frequency_unit", "must be natural or GHz");
    c.temperature_unit = r.text("system.temperature_unit").value_or("natural");
    if (c.temperature_unit != "natural" && c.temperature_unit != "K")
        r.fail("system.temperature_unit", "must be natural or K");
    c.omega_C = r.required("system.omega_C");
    c.omega_H = r.required("system.omega_H");
    c.g = r.number("system.g");
    c.gamma = r.required("system.gamma");
    c.unit_scale = r.number("system.unit_scale");
    c.allow_degenerate = r.boolean("system.allow_degenerate").value_or(false);
    if (!c.g) {
        c.warnings.push_back("g not given; inferred g = 9/17 omega_C = " + detail::num(c.g_declared()));
    }

    c.T_H = r.required("temperatures.T_H");
    c.T_R = r.required("temperatures.T_R");
    c.T_C = r.required("temperatures.T_C");
    for (const char* k : {"temperatures.T_H", "temperatures.T_R", "temperatures.T_C"})
        if (*r.number(k) < 0.0) r.fail(k, "temperature must be >= 0");

    if (tree.get_child_optional("filter")) {
        FilterConfig f;
        for (Qubit q : kQubits) {
            const std::string path = std::string("filter.") + qubit_letter(q);
            const auto v = r.text(path);
            f.set_mask(q, v ? detail::parse_mask(r, path, *v) : std::bitset<3>("111"));
        }
        c.filter = f;
    }

    const std::string mode = r.text("background.mode").value_or("none");
    if (mode == "none") c.background_mode = BackgroundSpec::Mode::None;
    else if (mode == "vacuum") c.background_mode = BackgroundSpec::Mode::Vacuum;
    else if (mode == "thermal") c.background_mode = BackgroundSpec::Mode::Thermal;
    else r.fail("background.mode", "must be none, vacuum or thermal, got '" + mode + "'");
    c.T0 = r.number("background.T0").value_or(0.0);
    c.gamma_B = r.number("background.gamma_B").value_or(0.0);
    if (c.background_mode == BackgroundSpec::Mode::Thermal && !r.number("background.T0"))
        r.fail("background.T0", "required for thermal background");
    if (c.background_mode != BackgroundSpec::Mode::None && !r.number("background.gamma_B"))
        r.fail("background.gamma_B", "required when a background is active");

    if (tree.get_child_optional("sweep")) {
        SweepSpec s;
        s.variable = r.text("sweep.variable").value_or("T_H");
        if (s.variable != "T_H" && s.variable != "T_R" && s.variable != "T_C" && s.variable != "T0")
            r.fail("sweep.variable", "must be one of T_H, T_R, T_C, T0");
        s.start = r.required("sweep.start");
        s.stop = r.required("sweep.stop");
        const double pts = r.required("sweep.points");
        if (pts < 0 || pts != std::floor(pts)) r.fail("sweep.points", "must be a non-negative integer");
        s.points = static_cast<std::size_t>(pts);
        const std::string spacing = r.text("sweep.spacing").value_or("linear");
        if (spacing != "linear" && spacing != "log") r.fail("sweep.spacing", "must be linear or log");
        s.log_spacing = spacing == "log";
        if (!(s.stop > s.start)) r.fail("sweep.stop", "sweep range must be strictly increasing");
        if (s.log_spacing && !(s.start > 0.0)) r.fail("sweep.start", "log spacing needs start > 0");
        c.sweep = s;
    }
    if (auto m = r.text("scan.mode")) {
        try {
            c.scan_mode = scan_mode_from_string(*m);
        } catch (const ConfigError& e) {
            r.fail("scan.mode", e.what());
        }
    }

    try {
        (void)c.params();
        validate(BackgroundSpec(c.background()));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return c;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

// Canonical INI text; parse_config(serialize_config(c)) reproduces c.
inline std::string serialize_config(const ScenarioConfig& c) {
    std::ostringstream os;
    os << "[system]\n";
    os << "frequency_unit = " << c.frequency_unit << "\n";
    os << "temperature_unit = " << c.temperature_unit << "\n";
    os << "omega_C = " << detail::num(c.omega_C) << "\n";
    os << "omega_H = " << detail::num(c.omega_H) << "\n";
    if (c.g) os << "g = " << detail::num(*c.g) << "\n";
    os << "gamma = " << detail::num(c.gamma) << "\n";
    if (c.unit_scale) os << "unit_scale = " << detail::num(*c.unit_scale) << "\n";
    os << "allow_degenerate = " << (c.allow_degenerate ? "true" : "false") << "\n";
    os << "\n[temperatures]\n";
    os << "T_H = " << detail::num(c.T_H) << "\nT_R = " << detail::num(c.T_R) << "\nT_C = " << detail::num(c.T_C) << "\n";
    os << "\n[filter]\n";
    for (Qubit q : kQubits) os << qubit_letter(q) << " = " << detail::mask_text(c.filter.mask(q)) << "\n";
    os << "\n[background]\n";
    os << "mode = " << to_string(c.background_mode) << "\n";
    if (c.background_mode == BackgroundSpec::Mode::Thermal) os << "T0 = " << detail::num(c.T0) << "\n";
    if (c.background_mode != BackgroundSpec::Mode::None) os << "gamma_B = " << detail::num(c.gamma_B) << "\n";
    if (c.sweep) {
        os << "\n[sweep]\n";
        os << "variable = " << c.sweep->variable << "\n";
        os << "start = " << detail::num(c.sweep->start) << "\nstop = " << detail::num(c.sweep->stop) << "\n";
        os << "points = " << c.sweep->points << "\n";
        os << "spacing = " << (c.sweep->log_spacing ? "log" : "linear") << "\n";
    }
    os << "\n[scan]\nmode = " << to_string(c.scan_mode) << "\n";
    return os.str();
}

// ------------------------------- solving -------------------------------------

struct PointSolution {
    Generator generator;
    SteadyStateSet states;
    std::vector<HeatCurrentReport> reports;  // one per steady state
    std::size_t selected{0};                 // state with the largest Q_C
    std::vector<std::string> warnings;

    const HeatCurrentReport& report() const { return reports.at(selected); }
};

inline PointSolution solve_point(const SystemParams& p, const FilterConfig& f, const Temperatures& t,
                                 const BackgroundSpec& bg) {
    PointSolution s{build_generator(p, f, t, bg), {}, {}, 0, {}};
    s.states = steady_states_numeric(s.generator);
    for (const auto& st : s.states.states) s.reports.push_back(make_report(s.generator, st.rho));
    for (std::size_t i = 1; i < s.reports.size(); ++i)
        if (s.reports[i].q_C > s.reports[s.selected].q_C) s.selected = i;
    for (std::size_t i = 0; i < s.reports.size(); ++i)
        if (!first_law_holds(s.reports[i])) {
            std::ostringstream os;
            os << "state " << i << ": first-law residual " << s.reports[i].first_law_residual();
            throw SolverFailure(os.str());
        }
    if (auto w = markov_validity_warning(p, p.gamma())) s.warnings.push_back(*w);
    if (bg.active())
        if (auto w = markov_validity_warning(p, bg.gamma_B)) s.warnings.push_back("background " + *w);
    return s;
}

inline PointSolution solve_point(const ScenarioConfig& c) {
    return solve_point(c.params(), c.filter, c.temperatures(), c.background());
}

// Runs fn(i) for i in [0, n) on up to `workers` threads.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn fn) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

// ------------------------------- steady report ---------------------------------

inline nlohmann::json currents_json(const HeatCurrentReport& r) {
    nlohmann::json j;
    j["qdot_C"] = r.q_C;
    j["qdot_H"] = r.q_H;
    j["qdot_R"] = r.q_R;
    j["qdot_B_C"] = r.qB_C;
    j["qdot_B_H"] = r.qB_H;
    j["qdot_B_R"] = r.qB_R;
    j["eta"] = r.eta ? nlohmann::json(*r.eta) : nlohmann::json(nullptr);
    j["sigma"] = std::isfinite(r.sigma) ? nlohmann::json(r.sigma) : nlohmann::json(r.sigma > 0 ? "inf" : "-inf");
    j["stage"] = std::string(to_string(r.stage));
    j["first_law_residual"] = r.first_law_residual();
    nlohmann::json per = nlohmann::json::array();
    for (const auto& d : r.per_dissipator)
        per.push_back({{"channel", d.id.label()}, {"source", std::string(to_string(d.source))}, {"qdot", d.value}});
    j["per_dissipator"] = per;
    return j;
}

inline nlohmann::json steady_report(const ScenarioConfig& c) {
    nlohmann::json j;
    j["config"] = serialize_config(c);
    std::vector<std::string> warnings = c.warnings;
    const PointSolution s = solve_point(c);
    warnings.insert(warnings.end(), s.warnings.begin(), s.warnings.end());
    const SystemParams& p = s.generator.params;
    const Temperatures t = c.temperatures();
    j["params"] = {{"omega_C", p.omega_C()}, {"omega_H", p.omega_H()}, {"omega_R", p.omega_R()},
                   {"g", p.g()},             {"gamma", p.gamma()},     {"unit_scale", p.unit_scale()}};
    j["temperatures"] = {{"T_H", t.hot}, {"T_R", t.room}, {"T_C", t.cold}};
    j["filter"] = c.filter.label();
    j["background"] = {{"mode", std::string(to_string(c.background_mode))},
                       {"T0", c.background().temperature()},
                       {"gamma_B", c.background().gamma_B}};
    j["unique"] = s.states.unique;
    j["selected_state"] = s.selected;
    nlohmann::json states = nlohmann::json::array();
    for (std::size_t i = 0; i < s.states.states.size(); ++i) {
        const auto& st = s.states.states[i];
        std::vector<int> support;
        for (int k : st.support) support.push_back(k + 1);
        nlohmann::json e;
        e["support"] = support;  // eigenlevels, 1-based
        e["populations"] = st.populations;
        e["currents"] = currents_json(s.reports[i]);
        states.push_back(e);
    }
    j["states"] = states;
    const CycleMatchReport cm = cycle_match_check(c.filter);
    j["cycle_match"] = cm.detail;
    j["warnings"] = warnings;
    return j;
}

// ---------------------------------- sweeps ------------------------------------

struct SweepRow {
    double value{0.0};
    double q_C{0.0}, q_H{0.0}, q_R{0.0};
    double qB_C{0.0}, qB_H{0.0}, qB_R{0.0};
    std::optional<double> eta;
    double sigma{0.0};
    std::optional<StageLabel> stage;  // nullopt: the row failed
    std::string error;

    bool ok() const { return error.empty(); }
};

struct SweepResult {
    std::string config_text;
    std::string variable{"T_H"};
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;
};

inline SweepRow sweep_row(double value, const HeatCurrentReport& r) {
    return {value, r.q_C, r.q_H, r.q_R, r.qB_C, r.qB_H, r.qB_R, r.eta, r.sigma, r.stage, {}};
}

inline SweepResult run_sweep(const ScenarioConfig& c, unsigned parallel = 1) {
    if (!c.sweep) throw ConfigError("sweep: config has no [sweep] section");
    SweepResult out;
    out.config_text = serialize_config(c);
    out.variable = c.sweep->variable;
    out.warnings = c.warnings;
    const std::vector<double> grid = c.sweep->grid();
    out.rows.resize(grid.size());
    std::vector<std::vector<std::string>> row_warnings(grid.size());
    parallel_for(grid.size(), parallel, [&](std::size_t i) {
        try {
            const PointSolution s = solve_point(c.with_value(c.sweep->variable, grid[i]));
            out.rows[i] = sweep_row(grid[i], s.report());
            row_warnings[i] = s.warnings;
        } catch (const std::exception& e) {
            SweepRow r;
            r.value = grid[i];
            r.error = e.what();
            const double nan = std::numeric_limits<double>::quiet_NaN();
            r.q_C = r.q_H = r.q_R = r.qB_C = r.qB_H = r.qB_R = r.sigma = nan;
            out.rows[i] = r;
        }
    });
    std::set<std::string> seen(out.warnings.begin(), out.warnings.end());
    for (const auto& ws : row_warnings)
        for (const auto& w : ws)
            if (seen.insert(w).second) out.warnings.push_back(w);
    return out;
}

inline SweepResult sweep_th(const ScenarioConfig& c, unsigned parallel = 1) {
    if (!c.sweep || c.sweep->variable != "T_H") throw ConfigError("sweep_th: sweep variable must be T_H");
    return run_sweep(c, parallel);
}

// ------------------------------------ CSV -------------------------------------

inline constexpr const char* kSweepColumns = "sweep_value,qdot_C,qdot_H,qdot_R,qdot_B_C,qdot_B_H,qdot_B_R,eta,sigma,stage";

inline std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline double csv_parse_number(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

inline std::string sweep_csv(const SweepResult& r) {
    std::ostringstream os;
    std::istringstream cfg(r.config_text);
    std::string line;
    while (std::getline(cfg, line)) os << (line.empty() ? "#" : "# " + line) << "\n";
    os << kSweepColumns << "\n";
    for (const auto& row : r.rows) {
        os << csv_number(row.value) << ',' << csv_number(row.q_C) << ',' << csv_number(row.q_H) << ','
           << csv_number(row.q_R) << ',' << csv_number(row.qB_C) << ',' << csv_number(row.qB_H) << ','
           << csv_number(row.qB_R) << ',' << csv_number(row.eta.value_or(std::numeric_limits<double>::quiet_NaN()))
           << ',' << csv_number(row.sigma) << ',' << (row.stage ? std::string(to_string(*row.stage)) : "error")
           << "\n";
    }
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error(path + ": write failed");
}

inline void emit_csv(const SweepResult& r, const std::string& path) { write_file(path, sweep_csv(r)); }

// Reads a sweep CSV, re-parses the embedded config and re-checks the first law on every row.
inline SweepResult parse_sweep_csv(const std::string& text, double rel_tol = 1e-10, double abs_floor = 1e-13) {
    SweepResult r;
    std::istringstream in(text);
    std::string line, cfg;
    bool header = false;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!header && !line.empty() && line[0] == '#') {
            cfg += line.size() > 2 ? line.substr(2) : std::string();
            cfg += "\n";
            continue;
        }
        if (!header) {
            if (line != kSweepColumns) throw std::runtime_error("csv line " + std::to_string(n) + ": unexpected column header");
            header = true;
            continue;
        }
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (f.size() != 10) throw std::runtime_error("csv line " + std::to_string(n) + ": expected 10 fields");
        SweepRow row;
        row.value = csv_parse_number(f[0]);
        row.q_C = csv_parse_number(f[1]);
        row.q_H = csv_parse_number(f[2]);
        row.q_R = csv_parse_number(f[3]);
        row.qB_C = csv_parse_number(f[4]);
        row.qB_H = csv_parse_number(f[5]);
        row.qB_R = csv_parse_number(f[6]);
        const double eta = csv_parse_number(f[7]);
        if (!std::isnan(eta)) row.eta = eta;
        row.sigma = csv_parse_number(f[8]);
        if (f[9] == "error") {
            row.error = "row failed during the sweep";
        } else {
            row.stage = stage_from_string(f[9]);
            if (!row.stage) throw std::runtime_error("csv line " + std::to_string(n) + ": unknown stage '" + f[9] + "'");
            const double sum = row.q_C + row.q_H + row.q_R + row.qB_C + row.qB_H + row.qB_R;
            const double mag = std::abs(row.q_C) + std::abs(row.q_H) + std::abs(row.q_R) + std::abs(row.qB_C) +
                               std::abs(row.qB_H) + std::abs(row.qB_R);
            if (!(std::abs(sum) <= rel_tol * mag || mag <= abs_floor)) {
                std::ostringstream os;
                os << "csv line " << n << ": first-law violation, sum " << sum << " vs magnitude " << mag;
                throw std::runtime_error(os.str());
            }
        }
        r.rows.push_back(row);
    }
    if (!header) throw std::runtime_error("csv: missing column header");
    r.config_text = cfg;
    const ScenarioConfig c = parse_config(cfg, "<csv header>");
    if (c.sweep) r.variable = c.sweep->variable;
    return r;
}

inline SweepResult load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sweep_csv(ss.str());
}

// ---------------------------------- scans -------------------------------------

// Compact, comma-free filter name: "H3R2C1", "H12R3C13", "H-R123C2".
inline std::string compact_label(const FilterConfig& f) {
    std::string s;
    for (Qubit q : kQubits) {
        s += qubit_letter(q);
        const auto kept = f.kept(q);
        if (kept.empty()) s += '-';
        for (int j : kept) s += static_cast<char>('0' + j);
    }
    return s;
}

struct ScanRow {
    std::size_t rank{0};
    FilterConfig filter;
    std::size_t n_states{0};
    double q_C{0.0}, q_H{0.0}, q_R{0.0};
    std::optional<double> eta;
    bool cools{false};
    std::string cycle_match;
    std::string error;
};

// Every configuration of the mode, ranked by Q_C (largest first; ties keep
// enumeration order). Multi-state configurations report their best branch.
inline std::vector<ScanRow> scan_filters(const ScenarioConfig& c, ScanMode mode, unsigned parallel = 1) {
    const std::vector<FilterConfig> filters = mode == ScanMode::All ? all_partial_filters() : single_channel_filters();
    const SystemParams p = c.params();
    const Temperatures t = c.temperatures();
    const BackgroundSpec bg = c.background();
    const double tol = default_stage_tol(p);
    std::vector<ScanRow> rows(filters.size());
    parallel_for(filters.size(), parallel, [&](std::size_t i) {
        ScanRow& r = rows[i];
        r.filter = filters[i];
        const CycleMatchReport cm = cycle_match_check(filters[i]);
        r.cycle_match = cm.status == CycleMatch::Matched      ? "matched"
                        : cm.status == CycleMatch::Mismatched ? "mismatched"
                                                              : "n/a";
        try {
            const PointSolution s = solve_point(p, filters[i], t, bg);
            const HeatCurrentReport& rep = s.report();
            r.n_states = s.states.states.size();
            r.q_C = rep.q_C;
            r.q_H = rep.q_H;
            r.q_R = rep.q_R;
            r.eta = rep.eta;
            r.cools = rep.q_C > tol;
        } catch (const std::exception& e) {
            r.error = e.what();
            r.q_C = r.q_H = r.q_R = std::numeric_limits<double>::quiet_NaN();
        }
    });
    std::stable_sort(rows.begin(), rows.end(), [](const ScanRow& a, const ScanRow& b) {
        const double qa = std::isnan(a.q_C) ? -std::numeric_limits<double>::infinity() : a.q_C;
        const double qb = std::isnan(b.q_C) ? -std::numeric_limits<double>::infinity() : b.q_C;
        return qa > qb;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = i + 1;
    return rows;
}

inline constexpr const char* kScanColumns = "rank,filter,n_states,qdot_C,qdot_H,qdot_R,eta,cools,cycle_match";

inline std::string scan_csv(const std::string& config_text, const std::vector<ScanRow>& rows) {
    std::ostringstream os;
    std::istringstream cfg(config_text);
    std::string line;
    while (std::getline(cfg, line)) os << (line.empty() ? "#" : "# " + line) << "\n";
    os << kScanColumns << "\n";
    for (const auto& r : rows) {
        os << r.rank << ',' << compact_label(r.filter) << ',' << r.n_states << ',' << csv_number(r.q_C) << ','
           << csv_number(r.q_H) << ',' << csv_number(r.q_R) << ','
           << csv_number(r.eta.value_or(std::numeric_limits<double>::quiet_NaN())) << ','
           << (r.error.empty() ? (r.cools ? "yes" : "no") : "error") << ',' << r.cycle_match << "\n";
    }
    return os.str();
}

// ------------------------------ validate (no solve) -----------------------------

struct ValidationCheck {
    std::string name;
    bool ok{false};
    std::string detail;
};

// Structural checks on a config: parameters, spectrum, channel algebra and
// trace preservation of the generator. No steady state is computed.
inline std::vector<ValidationCheck> validate_config(const ScenarioConfig& c) {
    std::vector<ValidationCheck> out;
    auto add = [&](std::string name, bool ok, std::string detail) {
        out.push_back({std::move(name), ok, std::move(detail)});
    };
    std::optional<SystemParams> parsed;
    try {
        parsed = c.params();
        const SystemParams& p = *parsed;
        add("parameters", true, "omega_C = " + detail::num(p.omega_C()) + ", omega_H = " + detail::num(p.omega_H()) +
                                    ", g = " + detail::num(p.g()) + ", gamma = " + detail::num(p.gamma()));
    } catch (const std::exception& e) {
        add("parameters", false, e.what());
        return out;
    }
    const SystemParams& p = *parsed;
    if (auto hit = find_degenerate_channels(p)) {
        add("channel degeneracy", p.allow_degenerate(),
            hit->first.label() + " and " + hit->second.label() + " coincide" +
                (p.allow_degenerate() ? " (allowed by config)" : ""));
    } else {
        add("channel degeneracy", true, "nine distinct channel frequencies");
    }
    const double eig_dev = eigensystem_crosscheck(p);
    add("eigensystem", eig_dev <= 1e-12, "closed form vs dense solver " + detail::num(eig_dev));
    const double comm = channel_commutator_check(p);
    add("eigen-operators", comm <= 1e-12, "max ||[H,A] + wA|| = " + detail::num(comm));
    try {
        const Generator gen = build_generator(p, c.filter, c.temperatures(), c.background());
        const ComplexVector vec_id = vectorize(identity(kSystemDim));
        const double tp = (vec_id.adjoint() * gen.liouvillian).norm();
        add("trace preservation", tp <= 1e-12 * std::max(1.0, gen.liouvillian.norm()),
            "||<<I|L|| = " + detail::num(tp));
        const PopulationMatrix pm = build_population_matrix(gen.dissipators);
        const double cs = pm.W.colwise().sum().cwiseAbs().maxCoeff();
        add("population matrix", cs <= 1e-12 * std::max(1.0, pm.W.cwiseAbs().maxCoeff()),
            "max |column sum| = " + detail::num(cs));
        const auto parts = invariant_components(pm);
        add("closed classes", true, std::to_string(parts.count()) + " closed communicating class(es)");
    } catch (const std::exception& e) {
        add("generator", false, e.what());
    }
    const CycleMatchReport cm = cycle_match_check(c.filter);
    add("cycle match", true, cm.detail);
    if (auto w = markov_validity_warning(p, p.gamma())) add("markov (warning)", true, *w);
    for (const auto& w : c.warnings) add("config (warning)", true, w);
    return out;
}

}  // namespace qfridge
