// fridge: command-line driver: steady | sweep | scan | validate | constants.
//
// Exit status is 1 on hard errors (bad config, solver failure, I/O), 0
// otherwise. Warnings go to stderr and never change the status.

#include "qfridge/qfridge.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

namespace {

using namespace qfridge;

void print_warnings(const std::vector<std::string>& ws) {
    for (const auto& w : ws) std::cerr << "warning: " << w << "\n";
}

void emit(const std::string& out, const std::string& content) {
    if (out.empty() || out == "-") {
        std::cout << content;
    } else {
        write_file(out, content);
    }
}

int cmd_steady(const std::string& config, const std::string& out) {
    const ScenarioConfig c = load_config(config);
    const nlohmann::json report = steady_report(c);
    print_warnings(report["warnings"].get<std::vector<std::string>>());
    emit(out, report.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const std::string& config, const std::string& out, unsigned parallel) {
    const ScenarioConfig c = load_config(config);
    const SweepResult r = run_sweep(c, parallel);
    print_warnings(r.warnings);
    std::size_t failed = 0;
    for (const auto& row : r.rows)
        if (!row.ok()) {
            ++failed;
            std::cerr << "row " << csv_number(row.value) << " failed: " << row.error << "\n";
        }
    emit(out, sweep_csv(r));
    std::cerr << r.rows.size() << " rows, " << failed << " failed\n";
    return 0;
}

int cmd_scan(const std::string& config, const std::string& out, unsigned parallel, const std::string& mode_flag) {
    const ScenarioConfig c = load_config(config);
    print_warnings(c.warnings);
    const ScanMode mode = mode_flag.empty() ? c.scan_mode : scan_mode_from_string(mode_flag);
    const auto rows = scan_filters(c, mode, parallel);
    std::size_t cooling = 0;
    for (const auto& r : rows) cooling += r.cools ? 1 : 0;
    emit(out, scan_csv(serialize_config(c), rows));
    std::cerr << rows.size() << " configurations, " << cooling << " cool\n";
    return 0;
}

int cmd_validate(const std::string& config) {
    const ScenarioConfig c = load_config(config);
    bool ok = true;
    for (const auto& chk : validate_config(c)) {
        std::cout << (chk.ok ? "ok   " : "FAIL ") << chk.name << ": " << chk.detail << "\n";
        ok = ok && chk.ok;
    }
    return ok ? 0 : 1;
}

int cmd_constants(const std::string& config) {
    std::printf("hbar            %.10e J s\n", units::hbar);
    std::printf("k_B             %.10e J/K\n", units::k_B);
    std::printf("k_B/hbar        %.10e rad s^-1 K^-1\n", units::k_B_over_hbar);
    std::printf("2 pi x 1 GHz    %.10e rad/s\n", units::rad_per_s_per_GHz);
    if (!config.empty()) {
        const ScenarioConfig c = load_config(config);
        const SystemParams p = c.params();
        const Temperatures t = c.temperatures();
        std::printf("unit_scale      %.10e rad/s per natural unit\n", p.unit_scale());
        std::printf("1 K             %.10e natural\n", units::temperature_from_K(1.0, p.unit_scale()));
        std::printf("omega_C         %.10g   omega_H %.10g   omega_R %.10g   g %.10g   gamma %.10g\n", p.omega_C(),
                    p.omega_H(), p.omega_R(), p.g(), p.gamma());
        std::printf("T_H             %.10g   T_R %.10g   T_C %.10g\n", t.hot, t.room, t.cold);
        const BackgroundSpec bg = c.background();
        if (bg.active()) std::printf("T0              %.10g   gamma_B %.10g\n", bg.temperature(), bg.gamma_B);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-qubit absorption refrigerator with filtered reservoirs"};
    app.require_subcommand(1);

    std::string config, out, mode;
    unsigned parallel = 1;

    auto* steady = app.add_subcommand("steady", "solve one configuration and write a JSON report");
    auto* sweep = app.add_subcommand("sweep", "sweep one temperature and write CSV");
    auto* scan = app.add_subcommand("scan", "rank filter configurations by cooling current");
    auto* validate = app.add_subcommand("validate", "structural checks on a config, no solve");
    auto* constants = app.add_subcommand("constants", "print unit-conversion factors");

    for (auto* sc : {steady, sweep, scan, validate})
        sc->add_option("--config", config, "scenario INI file")->required()->check(CLI::ExistingFile);
    constants->add_option("--config", config, "scenario INI file")->check(CLI::ExistingFile);
    for (auto* sc : {steady, sweep, scan}) sc->add_option("--out", out, "output path (default stdout)");
    for (auto* sc : {sweep, scan}) sc->add_option("--parallel", parallel, "worker threads")->check(CLI::Range(1u, 256u));
    scan->add_option("--mode", mode, "single_channel or all")->check(CLI::IsMember({"single_channel", "all"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*steady) return cmd_steady(config, out);
        if (*sweep) return cmd_sweep(config, out, parallel);
        if (*scan) return cmd_scan(config, out, parallel, mode);
        if (*validate) return cmd_validate(config);
        if (*constants) return cmd_constants(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
