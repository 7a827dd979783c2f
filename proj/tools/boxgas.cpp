// boxgas: free-expansion thermodynamics of a particle in a 1D square trap.
//
//   boxgas entropy-sweep|distribution|dynamics|se-curve [flags]
//   boxgas fig <fig1b|fig2|fig3|fig4|all> [flags]

#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "boxgas/errors.hpp"
#include "boxgas/figures.hpp"
#include "boxgas/run_config.hpp"

namespace {

struct Flags {
    std::map<std::string, std::string> values;
    std::optional<std::string> config_file;
    bool emit_plots = false;
};

void add_common(CLI::App* cmd, Flags& flags)
{
    const std::pair<const char*, const char*> options[] = {
        {"L", "trap size after expansion"},
        {"M", "particle mass"},
        {"T", "temperature (entropy-sweep)"},
        {"n-max", "basis size, 0 = automatic"},
        {"gamma", "dephasing rate in alpha/hbar"},
        {"ratios", "comma-separated L/lambda_T grid"},
        {"temps", "comma-separated temperatures"},
        {"nx", "profile grid points"},
        {"nt", "time samples per window"},
        {"windows", "time windows start:end,... in hbar/alpha"},
        {"out", "output directory (default $BOXGAS_OUT or ./boxgas-out)"},
        {"workers", "worker threads, 0 = all cores"},
    };
    for (const auto& [name, help] : options) {
        const std::string key = name;
        cmd->add_option_function<std::string>(
            "--" + key, [&flags, key](const std::string& v) { flags.values[key] = v; }, help);
    }
    cmd->add_flag("--emit-plots", flags.emit_plots, "write gnuplot scripts next to the CSV files");
    cmd->add_option_function<std::string>(
        "--config", [&flags](const std::string& v) { flags.config_file = v; }, "key = value config file");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"boxgas: quantum free expansion of a particle in a 1D square trap"};
    app.require_subcommand(1);
    Flags flags;
    std::string tag = "all";

    const std::pair<boxgas::Subcommand, const char*> commands[] = {
        {boxgas::Subcommand::EntropySweep, "entropy change vs L/lambda_T for free and isothermal expansion"},
        {boxgas::Subcommand::Distribution, "post-quench occupation distributions"},
        {boxgas::Subcommand::Dynamics, "density-profile dynamics under dephasing"},
        {boxgas::Subcommand::SECurve, "entropy-energy curves at fixed trap size"},
        {boxgas::Subcommand::Fig, "reproduce figures with their default parameters"},
    };
    std::map<CLI::App*, boxgas::Subcommand> lookup;
    for (const auto& [sub, help] : commands) {
        auto* cmd = app.add_subcommand(std::string(boxgas::subcommand_name(sub)), help);
        add_common(cmd, flags);
        if (sub == boxgas::Subcommand::Fig)
            cmd->add_option("tag", tag, "fig1b, fig2, fig3, fig4 or all")->required();
        lookup[cmd] = sub;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version are "errors" that exit 0
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        const auto sub = lookup.at(app.get_subcommands().front());
        auto cfg = boxgas::default_config(sub);
        cfg.figure_tag = tag;
        if (flags.config_file)
            boxgas::apply_config_file(cfg, *flags.config_file);
        for (const auto& [key, value] : flags.values)
            boxgas::apply_setting(cfg, key, value);
        if (flags.emit_plots)
            cfg.emit_plots = true;
        boxgas::validate(cfg);

        auto report = boxgas::run(cfg);
        boxgas::write_report(report, cfg);

        for (const auto& f : report.files)
            std::cout << (cfg.output_dir / f.name).string() << "\n";
        for (const auto& c : report.checks())
            if (!c.pass)
                std::cerr << "check failed: " << boxgas::format_check(c) << "\n";
        for (const auto& w : report.warnings)
            std::cerr << "warning: " << w << "\n";
        return report.fatal() ? 1 : 0;
    } catch (const boxgas::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
