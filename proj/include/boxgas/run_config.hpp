#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boxgas/spectral.hpp"

namespace boxgas {

enum class Subcommand { EntropySweep, Distribution, Dynamics, SECurve, Fig };

Subcommand parse_subcommand(std::string_view name);
std::string_view subcommand_name(Subcommand sub);

/// Effective settings for one CLI run. Built from defaults, then a config
/// file, then command-line flags (later layers win).
struct RunConfig {
    Subcommand subcommand = Subcommand::EntropySweep;
    std::string figure_tag = "all";
    TrapConfig trap;
    int n_max = 0; // 0 = choose automatically
    double gamma = 0.1;
    std::vector<double> ratios;
    std::optional<std::vector<double>> temps; // unset = per-figure default
    int nx = 400;
    int nt = 250;
    std::vector<std::pair<double, double>> windows{{0.0, 5.0}, {35.0, 40.0}};
    std::filesystem::path output_dir;
    bool emit_plots = false;
    int workers = 0;
};

/// 60 log-spaced ratios on [0.05, 100] with the experimental marker 40 merged in.
std::vector<double> default_ratio_grid();

/// Temperatures used by a subcommand when none are given.
std::vector<double> default_temps(Subcommand sub);

RunConfig default_config(Subcommand sub);

/// Sets one key from its text value. Throws ConfigError on an unknown key or
/// an unparsable value.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Reads flat "key = value" lines; '#' starts a comment.
void apply_config_text(RunConfig& cfg, std::string_view text);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Checks every parameter against the module preconditions.
void validate(const RunConfig& cfg);

std::vector<double> effective_temps(const RunConfig& cfg, Subcommand sub);

/// "key = value" lines sufficient to reproduce a run of `sub`; output
/// location and worker count are left out since they do not change results.
std::vector<std::string> config_echo(const RunConfig& cfg, Subcommand sub);

} // namespace boxgas
