#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "boxgas/csv.hpp"
#include "boxgas/errors.hpp"
#include "boxgas/figures.hpp"
#include "boxgas/run_config.hpp"

using namespace boxgas;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    static std::mt19937_64 rng(std::random_device{}());
    fs::path p = fs::temp_directory_path() / ("boxgas-test-" + name + "-" + std::to_string(rng() % 1000000007));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const fs::path& cwd = {})
{
    std::string cmd;
    if (!cwd.empty())
        cmd = "cd '" + cwd.string() + "' && ";
    cmd += std::string("'") + BOXGAS_CLI_PATH + "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::set<std::string> listing(const fs::path& dir)
{
    std::set<std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        out.insert(fs::relative(e.path(), dir).string());
    return out;
}

} // namespace

TEST_CASE("number formatting")
{
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_number(-2.5e-20) == "-2.5e-20");
}

TEST_CASE("csv round trip")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    std::uniform_int_distribution<int> e(-30, 30);
    for (int trial = 0; trial < 30; ++trial) {
        CsvTable t;
        const int cols = 1 + trial % 5;
        for (int c = 0; c < cols; ++c)
            t.header.push_back("c" + std::to_string(c));
        t.provenance = {"boxgas 1.0.0", "config: x = " + std::to_string(trial)};
        for (int r = 0; r < 7; ++r) {
            std::vector<double> row;
            for (int c = 0; c < cols; ++c)
                row.push_back(u(rng) * std::pow(10.0, e(rng)));
            if (r == 3)
                row[0] = std::numeric_limits<double>::quiet_NaN();
            t.add_row(row);
        }
        const auto back = CsvTable::parse(t.to_string());
        CHECK(back.header == t.header);
        CHECK(back.provenance == t.provenance);
        REQUIRE(back.rows.size() == t.rows.size());
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            for (int c = 0; c < cols; ++c) {
                const double a = t.rows[r][c], b = back.rows[r][c];
                if (std::isnan(a))
                    CHECK(std::isnan(b));
                else
                    CHECK(std::abs(a - b) <= 1e-11 * std::abs(a));
            }
        CHECK(back.to_string() == t.to_string());
    }
    const auto tiny = CsvTable::parse("a\n8.12366675524e-310\n");
    CHECK(tiny.rows[0][0] > 0.0);
    CHECK_THROWS_AS(CsvTable::parse("a\n1.5x\n"), std::invalid_argument);

    CsvTable t;
    t.header = {"a", "b"};
    CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)t.column("zz"), std::out_of_range);
}

TEST_CASE("config layering and parsing")
{
    auto cfg = default_config(Subcommand::EntropySweep);
    CHECK(cfg.ratios.size() == 61);
    CHECK(cfg.ratios.front() == doctest::Approx(0.05));
    CHECK(cfg.ratios.back() == doctest::Approx(100.0));
    CHECK(std::find(cfg.ratios.begin(), cfg.ratios.end(), 40.0) != cfg.ratios.end());

    apply_config_text(cfg, "# comment\nL = 2.5\nn_max = 300  # trailing\n\ngamma=0.25\nwindows = 0:1,2:3\n");
    CHECK(cfg.trap.L == 2.5);
    CHECK(cfg.n_max == 300);
    CHECK(cfg.gamma == 0.25);
    REQUIRE(cfg.windows.size() == 2);
    CHECK(cfg.windows[1].first == 2.0);
    apply_setting(cfg, "L", "3");
    CHECK(cfg.trap.L == 3.0);

    CHECK_THROWS_AS(apply_config_text(cfg, "colour = red\n"), ConfigError);
    CHECK_THROWS_AS(apply_config_text(cfg, "L 3\n"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "nx", "12.5"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "L", "abc"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "windows", "1-2"), ConfigError);

    auto bad = default_config(Subcommand::EntropySweep);
    bad.trap.T = 0.0;
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad = default_config(Subcommand::Dynamics);
    bad.trap.L = -1.0;
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad = default_config(Subcommand::Fig);
    bad.figure_tag = "fig9";
    CHECK_THROWS_AS(validate(bad), ConfigError);
    CHECK_THROWS_AS(parse_subcommand("plot"), ConfigError);
}

TEST_CASE("default temperatures")
{
    CHECK(default_temps(Subcommand::Distribution) == std::vector<double>{1.0, 100.0, 1000.0});
    CHECK(default_temps(Subcommand::Dynamics) == std::vector<double>{1.0, 100.0});
    const auto se = default_temps(Subcommand::SECurve);
    CHECK(se.front() == 0.0);
    CHECK(std::is_sorted(se.begin(), se.end()));
}

TEST_CASE("output directory falls back to BOXGAS_OUT")
{
    ::setenv("BOXGAS_OUT", "/tmp/somewhere-else", 1);
    CHECK(default_config(Subcommand::SECurve).output_dir == fs::path("/tmp/somewhere-else"));
    ::unsetenv("BOXGAS_OUT");
    CHECK(default_config(Subcommand::SECurve).output_dir == fs::path("boxgas-out"));
}

TEST_CASE("config echo reproduces the configuration")
{
    auto cfg = default_config(Subcommand::Dynamics);
    apply_config_text(cfg, "L = 1.7\ngamma = 0.3\ntemps = 1,5\nnx = 33\n");
    std::string text;
    for (const auto& line : config_echo(cfg, Subcommand::Dynamics))
        text += line + "\n";
    auto again = default_config(Subcommand::Dynamics);
    apply_config_text(again, text);
    CHECK(again.trap.L == cfg.trap.L);
    CHECK(again.gamma == cfg.gamma);
    CHECK(again.temps == cfg.temps);
    CHECK(again.nx == cfg.nx);
    CHECK(again.windows == cfg.windows);
    CHECK(config_echo(again, Subcommand::Dynamics) == config_echo(cfg, Subcommand::Dynamics));
}

TEST_CASE("in-memory runs")
{
    SUBCASE("entropy sweep")
    {
        auto cfg = default_config(Subcommand::EntropySweep);
        cfg.ratios = {0.05, 1.0, 40.0};
        const auto rep = run_entropy_sweep(cfg);
        REQUIRE(rep.files.size() == 1);
        const auto& t = rep.files[0].table;
        CHECK(rep.files[0].name == "fig1b.csv");
        CHECK(t.header == std::vector<std::string>{"ratio", "delta_s_fe", "delta_s_iso", "s_classical"});
        CHECK(std::abs(t.rows[0][1] - 1.035) <= 0.01);
        CHECK(t.rows[2][3] == doctest::Approx(std::log(2.0)));
        CHECK_FALSE(rep.fatal());
    }
    SUBCASE("distribution")
    {
        auto cfg = default_config(Subcommand::Distribution);
        const auto rep = run_distribution(cfg);
        REQUIRE(rep.files.size() == 3);
        CHECK(rep.files[2].name == "fig2_T1000.csv");
        for (const auto& c : rep.checks())
            CHECK_MESSAGE(c.pass, format_check(c));
        const auto& t = rep.files[0].table;
        double s = 0.0;
        for (double d : t.column_values("d_m"))
            s += d;
        CHECK(std::abs(s - 1.0) <= 1e-9);
    }
    SUBCASE("dynamics")
    {
        auto cfg = default_config(Subcommand::Dynamics);
        cfg.nx = 401;
        cfg.nt = 40;
        const auto rep = run_dynamics(cfg);
        REQUIRE(rep.files.size() == 3);
        CHECK(rep.files[0].table.header == std::vector<std::string>{"T", "t", "x", "p"});
        CHECK(rep.files[1].table.header == std::vector<std::string>{"x", "p_steady", "p_equilibrium"});
        CHECK(rep.files[0].table.rows.size() == 2u * 80u * 401u);
        for (const auto& c : rep.checks())
            CHECK_MESSAGE(c.pass, format_check(c));
        // coarse time grid must leave a note in the file
        bool noted = false;
        for (const auto& line : rep.files[0].table.provenance)
            noted = noted || line.find("Nyquist") != std::string::npos;
        CHECK(noted);
    }
    SUBCASE("entropy-energy curve")
    {
        const auto rep = run_se_curve(default_config(Subcommand::SECurve));
        REQUIRE(rep.files.size() == 1);
        const auto& t = rep.files[0].table;
        CHECK(t.rows[0][1] == doctest::Approx(4.0).epsilon(1e-8));
        bool marker = false;
        for (const auto& line : t.provenance)
            marker = marker || line.find("1.035") != std::string::npos;
        CHECK(marker);
        for (const auto& c : rep.checks())
            CHECK_MESSAGE(c.pass, format_check(c));
    }
}

TEST_CASE("plot scripts")
{
    auto cfg = default_config(Subcommand::EntropySweep);
    cfg.ratios = {0.5, 2.0};
    const auto rep = run_entropy_sweep(cfg);
    const auto script = emit_plot_script(rep.files[0].table, "fig1b", "fig1b.csv");
    CHECK(script == emit_plot_script(rep.files[0].table, "fig1b", "fig1b.csv"));
    CHECK(script.find("'fig1b.csv'") != std::string::npos);
    // the only file references are the sibling csv and its png
    const auto count = [&](const std::string& needle) {
        std::size_t n = 0;
        for (auto pos = script.find(needle); pos != std::string::npos; pos = script.find(needle, pos + 1))
            ++n;
        return n;
    };
    CHECK(count(".csv") == count("fig1b.csv"));
    CHECK(count(".csv'") == count("'fig1b.csv'"));
    CHECK(count(".png'") == count("'fig1b.png'"));
    CHECK(script.find("using 1:2") != std::string::npos);
    CHECK(script.find("using 1:3") != std::string::npos);
    CHECK(script.find("using 1:4") != std::string::npos);
    CHECK(script.find("ln 2") != std::string::npos);
}

TEST_CASE("binary: determinism, echo rerun and output confinement")
{
    const fs::path base = scratch("cli");
    const fs::path cwd = base / "cwd";
    fs::create_directories(cwd);
    const std::string args = "entropy-sweep --ratios 0.3,3,30 --emit-plots";

    REQUIRE(run_cli(args + " --out '" + (base / "a").string() + "'", cwd) == 0);
    REQUIRE(run_cli(args + " --out '" + (base / "b").string() + "'", cwd) == 0);
    CHECK(fs::is_empty(cwd));
    CHECK(listing(base / "a") == std::set<std::string>{"fig1b.csv", "fig1b.plot"});
    CHECK(slurp(base / "a" / "fig1b.csv") == slurp(base / "b" / "fig1b.csv"));
    CHECK(slurp(base / "a" / "fig1b.plot") == slurp(base / "b" / "fig1b.plot"));

    // rebuild a config file from the echo and rerun it
    std::ofstream conf(base / "echo.conf");
    for (const auto& line : CsvTable::read(base / "a" / "fig1b.csv").provenance)
        if (line.rfind("config: ", 0) == 0)
            conf << line.substr(8) << "\n";
    conf.close();
    REQUIRE(run_cli("entropy-sweep --emit-plots --config '" + (base / "echo.conf").string() + "' --out '" +
                        (base / "c").string() + "'",
                    cwd) == 0);
    CHECK(slurp(base / "a" / "fig1b.csv") == slurp(base / "c" / "fig1b.csv"));

    SUBCASE("flags override the config file")
    {
        std::ofstream f(base / "over.conf");
        f << "ratios = 1,2\nT = 3\n";
        f.close();
        REQUIRE(run_cli("entropy-sweep --config '" + (base / "over.conf").string() + "' --ratios 5 --out '" +
                            (base / "d").string() + "'",
                        cwd) == 0);
        const auto t = CsvTable::read(base / "d" / "fig1b.csv");
        REQUIRE(t.rows.size() == 1);
        CHECK(t.rows[0][0] == 5.0);
    }
    SUBCASE("BOXGAS_OUT is the default destination")
    {
        const std::string cmd = "BOXGAS_OUT='" + (base / "env").string() + "' '" + BOXGAS_CLI_PATH +
                                "' se-curve --temps 0,1 >/dev/null 2>&1";
        CHECK(std::system(cmd.c_str()) == 0);
        CHECK(fs::exists(base / "env" / "fig4.csv"));
    }
    SUBCASE("exit codes")
    {
        CHECK(run_cli("entropy-sweep --nx abc --out '" + (base / "e").string() + "'", cwd) == 2);
        CHECK(run_cli("entropy-sweep --T 0 --out '" + (base / "e").string() + "'", cwd) == 2);
        CHECK(run_cli("fig fig9 --out '" + (base / "e").string() + "'", cwd) == 2);
        CHECK(run_cli("entropy-sweep --config /nonexistent/boxgas.conf", cwd) == 2);
        CHECK(run_cli("distribution --temps 1000 --n-max 8 --out '" + (base / "e").string() + "'", cwd) == 1);
        CHECK(run_cli("frobnicate", cwd) == 2);
        CHECK(run_cli("entropy-sweep --bogus 1", cwd) == 2);
        CHECK(run_cli("--help", cwd) == 0);
        CHECK(fs::is_empty(cwd));
    }
    fs::remove_all(base);
}
