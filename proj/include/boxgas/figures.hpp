#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "boxgas/csv.hpp"
#include "boxgas/run_config.hpp"

namespace boxgas {

inline constexpr const char* version_string = "boxgas 1.0.0";

/// Zero-temperature entropy after free expansion, drawn as a reference line.
inline constexpr double zero_temperature_entropy_marker = 1.035;

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double limit = 0.0;
};

/// "check: <name> PASS|FAIL value=<v> limit=<l>"
std::string format_check(const CheckResult& c);

/// Checks recorded in a table's provenance block.
std::vector<CheckResult> embedded_checks(const CsvTable& t);

struct OutputFile {
    std::string name;       // file name inside the output directory
    std::string plot_style; // fig1b, fig2, fig3, fig3_steady, fig4
    CsvTable table;
};

struct RunReport {
    std::vector<OutputFile> files;
    std::vector<std::string> warnings;
    std::size_t total_points = 0;
    std::size_t failed_points = 0;

    bool fatal() const { return total_points > 0 && failed_points == total_points; }
    std::vector<CheckResult> checks() const;
};

// Each run_* computes its tables in memory; write_report puts them on disk.
RunReport run_entropy_sweep(const RunConfig& cfg);
RunReport run_distribution(const RunConfig& cfg);
RunReport run_dynamics(const RunConfig& cfg);
RunReport run_se_curve(const RunConfig& cfg);

/// Figure tags: fig1b, fig2, fig3, fig4, all.
RunReport run_figures(const RunConfig& cfg);

/// Dispatches on cfg.subcommand.
RunReport run(const RunConfig& cfg);

/// Writes every table (and its plot script when cfg.emit_plots) under
/// cfg.output_dir. Plot-script failures become warnings.
void write_report(RunReport& report, const RunConfig& cfg);

// Checks evaluated on tables, shared by the run_* functions and by readers of
// the written files.
std::vector<CheckResult> check_entropy_sweep(const CsvTable& t);
std::vector<CheckResult> check_distribution(const CsvTable& t);
std::vector<CheckResult> check_distribution_trend(const CsvTable& low_t, const CsvTable& high_t);
std::vector<CheckResult> check_dynamics_grid(const CsvTable& t);
/// The equilibrium peak at x = 0 is only pronounced at low temperature.
std::vector<CheckResult> check_steady_profile(const CsvTable& t, bool expect_equilibrium_peak);
std::vector<CheckResult> check_steady_contrast(const CsvTable& low_t, const CsvTable& high_t);
std::vector<CheckResult> check_se_curve(const CsvTable& t);

/// gnuplot script that renders `csv_name` (a sibling file) into a PNG.
std::string emit_plot_script(const CsvTable& table, const std::string& plot_style,
                             const std::string& csv_name);

} // namespace boxgas
