#include "boxgas/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "boxgas/dynamics.hpp"
#include "boxgas/errors.hpp"
#include "boxgas/quench.hpp"
#include "boxgas/thermo.hpp"

namespace boxgas {

namespace {

const double ln2 = std::numbers::ln2;

std::string short_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::vector<std::string> provenance(const RunConfig& cfg, Subcommand sub, const std::string& figure)
{
    std::vector<std::string> lines{version_string, "figure: " + figure,
                                   "command: " + std::string(subcommand_name(sub))};
    for (const auto& line : config_echo(cfg, sub))
        lines.push_back("config: " + line);
    return lines;
}

void embed(CsvTable& t, const std::vector<CheckResult>& checks)
{
    for (const auto& c : checks)
        t.provenance.push_back(format_check(c));
}

CheckResult within(std::string name, double value, double target, double tol)
{
    const double err = std::abs(value - target);
    return {std::move(name), err <= tol, value, tol};
}

CheckResult at_most(std::string name, double value, double limit)
{
    return {std::move(name), value <= limit, value, limit};
}

CheckResult at_least(std::string name, double value, double limit)
{
    return {std::move(name), value >= limit, value, limit};
}

// Row whose first column is closest to x.
std::size_t nearest_row(const CsvTable& t, double x)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < t.rows.size(); ++i)
        if (std::abs(t.rows[i][0] - x) < std::abs(t.rows[best][0] - x))
            best = i;
    return best;
}

bool non_decreasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] >= v[i - 1]))
            return false;
    return true;
}

double sup_distance(const CsvTable& t)
{
    const auto a = t.column_values("p_steady");
    const auto b = t.column_values("p_equilibrium");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double thermal_reference(const TrapConfig& cfg, int m)
{
    if (cfg.zero_temperature())
        return m == 2 ? 0.5 : 0.0;
    const double q = cfg.q();
    return 0.5 * std::exp(-q * m * m / 4.0 - log_partition_function(q));
}

RunConfig as(const RunConfig& cfg, Subcommand sub)
{
    RunConfig out = cfg;
    out.subcommand = sub;
    return out;
}

} // namespace

std::string format_check(const CheckResult& c)
{
    return "check: " + c.name + (c.pass ? " PASS" : " FAIL") + " value=" + format_number(c.value)
           + " limit=" + format_number(c.limit);
}

std::vector<CheckResult> embedded_checks(const CsvTable& t)
{
    std::vector<CheckResult> out;
    for (const auto& line : t.provenance) {
        if (line.rfind("check: ", 0) != 0)
            continue;
        std::istringstream is(line.substr(7));
        CheckResult c;
        std::string verdict, value, limit;
        is >> c.name >> verdict >> value >> limit;
        c.pass = verdict == "PASS";
        auto num = [](const std::string& kv) {
            const auto eq = kv.find('=');
            const auto s = kv.substr(eq + 1);
            return s == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(s);
        };
        c.value = num(value);
        c.limit = num(limit);
        out.push_back(c);
    }
    return out;
}

std::vector<CheckResult> RunReport::checks() const
{
    std::vector<CheckResult> out;
    for (const auto& f : files)
        for (auto& c : embedded_checks(f.table))
            out.push_back(std::move(c));
    return out;
}

// --- checks -----------------------------------------------------------------

std::vector<CheckResult> check_entropy_sweep(const CsvTable& t)
{
    const auto ratio = t.column_values("ratio");
    const auto fe = t.column_values("delta_s_fe");
    const auto iso = t.column_values("delta_s_iso");
    std::vector<CheckResult> out;
    out.push_back(within("zero_temperature_constant", fe.front(), 1.035, 1e-3));
    const auto r100 = nearest_row(t, 100.0);
    const auto r40 = nearest_row(t, 40.0);
    if (ratio[r100] == 100.0) {
        out.push_back(within("classical_limit_fe_r100", fe[r100], ln2, 1e-3));
        out.push_back(within("classical_limit_iso_r100", iso[r100], ln2, 1e-3));
    }
    if (ratio[r40] == 40.0) {
        out.push_back(within("classical_limit_fe_r40", fe[r40], ln2, 0.02));
        out.push_back(within("classical_limit_iso_r40", iso[r40], ln2, 0.02));
    }
    out.push_back(within("last_row_near_ln2", fe.back(), ln2, 0.02));
    double min_fe = std::numeric_limits<double>::infinity();
    double worst_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fe.size(); ++i) {
        min_fe = std::min(min_fe, fe[i]);
        if (ratio[i] <= 1.0)
            worst_gap = std::min(worst_gap, fe[i] - iso[i]);
    }
    out.push_back(at_least("delta_s_fe_nonnegative", min_fe, 0.0));
    if (std::isfinite(worst_gap))
        out.push_back(at_least("fe_above_iso_for_ratio_le_1", worst_gap, 0.0));
    return out;
}

std::vector<CheckResult> check_distribution(const CsvTable& t)
{
    const auto m = t.column_values("m");
    const auto d = t.column_values("d_m");
    const auto ref = t.column_values("thermal_reference");
    double even = 0.0, odd = 0.0, even_dev = 0.0;
    for (std::size_t i = m.size(); i-- > 0;) {
        const bool is_even = static_cast<long>(m[i]) % 2 == 0;
        (is_even ? even : odd) += d[i];
        if (is_even)
            even_dev = std::max(even_dev, std::abs(d[i] - ref[i]));
    }
    return {
        within("normalization", even + odd, 1.0, 1e-9),
        within("even_mass_half", even, 0.5, 1e-8),
        within("odd_mass_half", odd, 0.5, 1e-8),
        at_most("even_rows_thermal", even_dev, 1e-12),
    };
}

std::vector<CheckResult> check_distribution_trend(const CsvTable& low_t, const CsvTable& high_t)
{
    auto deviation = [](const CsvTable& t) {
        const auto d = t.column_values("d_m");
        const auto ref = t.column_values("thermal_reference");
        double dev = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
            dev = std::max(dev, std::abs(d[i] - ref[i]));
        return dev;
    };
    const double lo = deviation(low_t);
    const double hi = deviation(high_t);
    return {{"thermal_deviation_shrinks_with_T", hi < lo, hi, lo}};
}

std::vector<CheckResult> check_dynamics_grid(const CsvTable& t)
{
    const auto cT = t.column("T");
    const auto ct = t.column("t");
    const auto cx = t.column("x");
    const auto cp = t.column("p");
    double worst = 0.0;
    double min_p = std::numeric_limits<double>::infinity();
    std::vector<double> xs, ps;
    auto flush = [&] {
        if (!xs.empty())
            worst = std::max(worst, std::abs(trapezoid(xs, ps) - 1.0));
        xs.clear();
        ps.clear();
    };
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        if (i > 0 && (r[cT] != t.rows[i - 1][cT] || r[ct] != t.rows[i - 1][ct]))
            flush();
        xs.push_back(r[cx]);
        ps.push_back(r[cp]);
        min_p = std::min(min_p, r[cp]);
    }
    flush();
    return {at_most("slice_normalization", worst, 1e-6), at_least("profile_nonnegative", min_p, 0.0)};
}

std::vector<CheckResult> check_steady_profile(const CsvTable& t, bool expect_equilibrium_peak)
{
    const auto c = nearest_row(t, 0.0);
    const auto ps = t.column_values("p_steady");
    const auto pe = t.column_values("p_equilibrium");
    std::vector<CheckResult> out;
    if (c == 0 || c + 1 >= ps.size())
        return out;
    const double dip = std::min(ps[c - 1], ps[c + 1]) - ps[c];
    const double peak = pe[c] - std::max(pe[c - 1], pe[c + 1]);
    out.push_back({"steady_center_local_minimum", dip > 0.0, dip, 0.0});
    if (expect_equilibrium_peak)
        out.push_back({"equilibrium_center_local_maximum", peak > 0.0, peak, 0.0});
    return out;
}

std::vector<CheckResult> check_steady_contrast(const CsvTable& low_t, const CsvTable& high_t)
{
    const double ratio = sup_distance(low_t) / sup_distance(high_t);
    return {at_least("discrepancy_reduction_factor", ratio, 5.0)};
}

std::vector<CheckResult> check_se_curve(const CsvTable& t)
{
    const auto T = t.column_values("T");
    const auto e_fe = t.column_values("e_fe");
    const auto s_fe = t.column_values("s_fe");
    const auto e_eq = t.column_values("e_eq");
    const auto s_eq = t.column_values("s_eq");
    std::vector<CheckResult> out;
    if (T.front() == 0.0) {
        out.push_back(within("zero_T_fe_energy", e_fe.front(), 4.0, 4e-8));
        out.push_back(within("zero_T_fe_entropy", s_fe.front(), 1.035, 1e-3));
        out.push_back(within("zero_T_eq_energy", e_eq.front(), 1.0, 1e-12));
        out.push_back(within("zero_T_eq_entropy", s_eq.front(), 0.0, 1e-9));
    }
    out.push_back({"s_fe_non_decreasing", non_decreasing(s_fe), 0.0, 0.0});
    out.push_back({"s_eq_non_decreasing", non_decreasing(s_eq), 0.0, 0.0});
    out.push_back({"e_fe_non_decreasing", non_decreasing(e_fe), 0.0, 0.0});
    out.push_back({"e_eq_non_decreasing", non_decreasing(e_eq), 0.0, 0.0});
    out.push_back(at_most("high_T_entropy_agreement", std::abs(s_fe.back() - s_eq.back()) / s_eq.back(), 0.05));
    return out;
}

// --- runs -------------------------------------------------------------------

RunReport run_entropy_sweep(const RunConfig& cfg)
{
    validate(as(cfg, Subcommand::EntropySweep));
    RunReport report;
    const auto sweep = sweep_ratio(cfg.trap, cfg.ratios, cfg.n_max, cfg.workers);

    CsvTable t;
    t.provenance = provenance(cfg, Subcommand::EntropySweep, "fig1b");
    t.provenance.push_back("units: ratio = L/lambda_T at fixed T; entropies in kB");
    t.header = {"ratio", "delta_s_fe", "delta_s_iso", "s_classical"};
    for (std::size_t i = 0; i < sweep.axis.size(); ++i)
        t.add_row({sweep.axis[i], sweep.ds_fe[i], sweep.ds_iso[i], ln2});
    for (const auto& d : sweep.diagnostics)
        t.provenance.push_back("diag: " + d);
    report.total_points = sweep.axis.size();
    report.failed_points = sweep.diagnostics.size();
    if (!report.fatal())
        embed(t, check_entropy_sweep(t));
    report.warnings = sweep.diagnostics;
    report.files.push_back({"fig1b.csv", "fig1b", std::move(t)});
    return report;
}

RunReport run_distribution(const RunConfig& cfg)
{
    validate(as(cfg, Subcommand::Distribution));
    RunReport report;
    const auto temps = effective_temps(cfg, Subcommand::Distribution);
    std::vector<CsvTable> tables(temps.size());
    std::vector<bool> ok(temps.size(), false);
    for (std::size_t k = 0; k < temps.size(); ++k) {
        CsvTable& t = tables[k];
        t.provenance = provenance(cfg, Subcommand::Distribution, "fig2");
        t.provenance.push_back("temperature: " + format_number(temps[k]));
        t.provenance.push_back("units: d_m and thermal_reference are probabilities");
        t.header = {"m", "d_m", "thermal_reference"};
        ++report.total_points;
        try {
            TrapConfig trap = cfg.trap;
            trap.T = temps[k];
            const auto dist = diagonal_distribution(trap, thermo_n_max(trap, cfg.n_max));
            for (int m = 1; m <= dist.n_max(); ++m)
                t.add_row({static_cast<double>(m), dist.at(m), thermal_reference(trap, m)});
            t.provenance.push_back("tail_mass: " + format_number(dist.tail_mass));
            embed(t, check_distribution(t));
            ok[k] = true;
        } catch (const std::exception& e) {
            t.provenance.push_back(std::string("diag: ") + e.what());
            report.warnings.push_back("T = " + format_number(temps[k]) + ": " + e.what());
            ++report.failed_points;
        }
    }
    if (temps.size() >= 2 && ok.front() && ok.back())
        embed(tables.back(), check_distribution_trend(tables.front(), tables.back()));
    for (std::size_t k = 0; k < temps.size(); ++k)
        report.files.push_back({"fig2_T" + short_number(temps[k]) + ".csv", "fig2", std::move(tables[k])});
    return report;
}

RunReport run_dynamics(const RunConfig& cfg)
{
    validate(as(cfg, Subcommand::Dynamics));
    RunReport report;
    const auto temps = effective_temps(cfg, Subcommand::Dynamics);
    const auto model = DephasingModel::uniform(cfg.gamma);

    CsvTable grid_table;
    grid_table.provenance = provenance(cfg, Subcommand::Dynamics, "fig3");
    grid_table.provenance.push_back("units: t in hbar/alpha, gamma in alpha/hbar, x in units of length, p in 1/length");
    grid_table.header = {"T", "t", "x", "p"};
    std::vector<OutputFile> steady_files;
    std::vector<bool> ok(temps.size(), false);

    for (std::size_t k = 0; k < temps.size(); ++k) {
        ++report.total_points;
        TrapConfig trap = cfg.trap;
        trap.T = temps[k];
        CsvTable steady;
        steady.provenance = provenance(cfg, Subcommand::Dynamics, "fig3");
        steady.provenance.push_back("temperature: " + format_number(temps[k]));
        steady.header = {"x", "p_steady", "p_equilibrium"};
        try {
            const auto movie = dynamics_movie(trap, model, cfg.windows, cfg.nx, cfg.nt, cfg.n_max, cfg.workers);
            grid_table.provenance.push_back("n_max: T=" + format_number(temps[k]) + " " + std::to_string(movie.n_max));
            for (const auto& w : movie.warnings) {
                grid_table.provenance.push_back("warning: T=" + format_number(temps[k]) + " " + w);
                report.warnings.push_back(w);
            }
            for (Eigen::Index j = 0; j < movie.p.cols(); ++j)
                for (Eigen::Index i = 0; i < movie.p.rows(); ++i) {
                    double p = movie.p(i, j);
                    if (p < 0.0 && p > -1e-10)
                        p = 0.0;
                    grid_table.add_row({temps[k], movie.t[static_cast<std::size_t>(j)],
                                        movie.x[static_cast<std::size_t>(i)], p});
                }

            // odd point count keeps x = 0 on the steady grid
            const auto x = trap_grid(trap.L, cfg.nx % 2 == 0 ? cfg.nx + 1 : cfg.nx);
            const auto ps = steady_profile(trap, x, movie.n_max);
            const auto pe = equilibrium_profile(trap, x);
            for (std::size_t i = 0; i < x.size(); ++i)
                steady.add_row({x[i], ps[i], pe[i]});
            embed(steady, check_steady_profile(steady, k == 0));
            ok[k] = true;
        } catch (const std::exception& e) {
            grid_table.provenance.push_back("diag: T=" + format_number(temps[k]) + " " + e.what());
            steady.provenance.push_back(std::string("diag: ") + e.what());
            report.warnings.push_back(e.what());
            ++report.failed_points;
        }
        steady_files.push_back({"fig3_steady_T" + short_number(temps[k]) + ".csv", "fig3_steady", std::move(steady)});
    }
    if (!report.fatal())
        embed(grid_table, check_dynamics_grid(grid_table));
    if (temps.size() >= 2 && ok.front() && ok.back())
        embed(steady_files.back().table, check_steady_contrast(steady_files.front().table, steady_files.back().table));
    report.files.push_back({"fig3.csv", "fig3", std::move(grid_table)});
    for (auto& f : steady_files)
        report.files.push_back(std::move(f));
    return report;
}

RunReport run_se_curve(const RunConfig& cfg)
{
    validate(as(cfg, Subcommand::SECurve));
    RunReport report;
    const auto temps = effective_temps(cfg, Subcommand::SECurve);
    const auto [fe, eq] = se_curves(cfg.trap, temps, cfg.n_max, cfg.workers);
    CsvTable t;
    t.provenance = provenance(cfg, Subcommand::SECurve, "fig4");
    t.provenance.push_back("units: energies in alpha, entropies in kB, fixed L");
    t.provenance.push_back("marker: C = " + format_number(zero_temperature_entropy_marker));
    t.header = {"T", "e_fe", "s_fe", "e_eq", "s_eq"};
    for (std::size_t i = 0; i < temps.size(); ++i)
        t.add_row({temps[i], fe.energy[i], fe.entropy[i], eq.energy[i], eq.entropy[i]});
    report.total_points = temps.size();
    embed(t, check_se_curve(t));
    report.files.push_back({"fig4.csv", "fig4", std::move(t)});
    return report;
}

RunReport run_figures(const RunConfig& cfg)
{
    validate(cfg);
    const std::string& tag = cfg.figure_tag;
    RunReport all;
    auto merge = [&](RunReport r) {
        for (auto& f : r.files)
            all.files.push_back(std::move(f));
        for (auto& w : r.warnings)
            all.warnings.push_back(std::move(w));
        all.total_points += r.total_points;
        all.failed_points += r.failed_points;
    };
    // per-figure defaults apply unless the caller pinned temperatures
    if (tag == "all" || tag == "fig1b")
        merge(run_entropy_sweep(as(cfg, Subcommand::EntropySweep)));
    if (tag == "all" || tag == "fig2")
        merge(run_distribution(as(cfg, Subcommand::Distribution)));
    if (tag == "all" || tag == "fig3")
        merge(run_dynamics(as(cfg, Subcommand::Dynamics)));
    if (tag == "all" || tag == "fig4")
        merge(run_se_curve(as(cfg, Subcommand::SECurve)));
    return all;
}

RunReport run(const RunConfig& cfg)
{
    switch (cfg.subcommand) {
    case Subcommand::EntropySweep:
        return run_entropy_sweep(cfg);
    case Subcommand::Distribution:
        return run_distribution(cfg);
    case Subcommand::Dynamics:
        return run_dynamics(cfg);
    case Subcommand::SECurve:
        return run_se_curve(cfg);
    case Subcommand::Fig:
        return run_figures(cfg);
    }
    throw ConfigError("unknown subcommand");
}

void write_report(RunReport& report, const RunConfig& cfg)
{
    std::filesystem::create_directories(cfg.output_dir);
    for (const auto& f : report.files) {
        f.table.write(cfg.output_dir / f.name);
        if (!cfg.emit_plots)
            continue;
        try {
            const auto stem = std::filesystem::path(f.name).stem().string();
            std::ofstream os(cfg.output_dir / (stem + ".plot"), std::ios::binary);
            if (!os)
                throw std::runtime_error("cannot open plot script for " + f.name);
            os << emit_plot_script(f.table, f.plot_style, f.name);
        } catch (const std::exception& e) {
            report.warnings.push_back(std::string("plot script: ") + e.what());
        }
    }
}

} // namespace boxgas
