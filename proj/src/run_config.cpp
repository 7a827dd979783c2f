#include "boxgas/run_config.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "boxgas/errors.hpp"

namespace boxgas {

namespace {

constexpr std::array<std::pair<Subcommand, std::string_view>, 5> subcommand_names{{
    {Subcommand::EntropySweep, "entropy-sweep"},
    {Subcommand::Distribution, "distribution"},
    {Subcommand::Dynamics, "dynamics"},
    {Subcommand::SECurve, "se-curve"},
    {Subcommand::Fig, "fig"},
}};

std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::string exact(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(std::string_view key, std::string_view text)
{
    const std::string s(trim(text));
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw ConfigError("bad number for " + std::string(key) + ": '" + s + "'");
    return v;
}

int to_int(std::string_view key, std::string_view text)
{
    const double v = to_double(key, text);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw ConfigError("expected an integer for " + std::string(key));
    return static_cast<int>(v);
}

bool to_bool(std::string_view key, std::string_view text)
{
    const auto s = trim(text);
    if (s == "1" || s == "true" || s == "yes" || s == "on")
        return true;
    if (s == "0" || s == "false" || s == "no" || s == "off")
        return false;
    throw ConfigError("expected a boolean for " + std::string(key));
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(trim(s.substr(pos, next == std::string_view::npos ? next : next - pos)));
        if (next == std::string_view::npos)
            break;
        pos = next + 1;
    }
    return out;
}

std::vector<double> to_list(std::string_view key, std::string_view text)
{
    std::vector<double> out;
    for (auto item : split(text, ','))
        out.push_back(to_double(key, item));
    return out;
}

std::string join(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ',';
        out += exact(v[i]);
    }
    return out;
}

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw ConfigError(what);
}

void require_increasing(const std::vector<double>& v, const std::string& what)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        require(v[i] > v[i - 1], what + " must be strictly increasing");
}

} // namespace

Subcommand parse_subcommand(std::string_view name)
{
    for (const auto& [sub, n] : subcommand_names)
        if (n == name)
            return sub;
    throw ConfigError("unknown subcommand " + std::string(name));
}

std::string_view subcommand_name(Subcommand sub)
{
    for (const auto& [s, n] : subcommand_names)
        if (s == sub)
            return n;
    return "?";
}

std::vector<double> default_ratio_grid()
{
    constexpr int points = 60;
    const double lo = std::log(0.05);
    const double hi = std::log(100.0);
    std::vector<double> grid;
    for (int i = 0; i < points; ++i)
        grid.push_back(i == points - 1 ? 100.0 : std::exp(lo + (hi - lo) * i / (points - 1)));
    grid.front() = 0.05;
    for (auto it = grid.begin(); it != grid.end(); ++it)
        if (*it > 40.0) {
            grid.insert(it, 40.0);
            break;
        }
    return grid;
}

std::vector<double> default_temps(Subcommand sub)
{
    switch (sub) {
    case Subcommand::Distribution:
        return {1.0, 100.0, 1000.0};
    case Subcommand::Dynamics:
        return {1.0, 100.0};
    case Subcommand::SECurve: {
        std::vector<double> temps{0.0};
        constexpr int points = 40;
        for (int i = 0; i < points; ++i)
            temps.push_back(std::pow(10.0, -1.0 + 5.0 * i / (points - 1)));
        temps.back() = 1e4;
        return temps;
    }
    default:
        return {};
    }
}

RunConfig default_config(Subcommand sub)
{
    RunConfig cfg;
    cfg.subcommand = sub;
    cfg.ratios = default_ratio_grid();
    if (const char* env = std::getenv("BOXGAS_OUT"); env && *env)
        cfg.output_dir = env;
    else
        cfg.output_dir = "boxgas-out";
    return cfg;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value)
{
    if (key == "L")
        cfg.trap.L = to_double(key, value);
    else if (key == "M")
        cfg.trap.M = to_double(key, value);
    else if (key == "T")
        cfg.trap.T = to_double(key, value);
    else if (key == "hbar")
        cfg.trap.hbar = to_double(key, value);
    else if (key == "kB")
        cfg.trap.kB = to_double(key, value);
    else if (key == "n_max" || key == "n-max")
        cfg.n_max = to_int(key, value);
    else if (key == "gamma")
        cfg.gamma = to_double(key, value);
    else if (key == "ratios")
        cfg.ratios = to_list(key, value);
    else if (key == "temps")
        cfg.temps = to_list(key, value);
    else if (key == "nx")
        cfg.nx = to_int(key, value);
    else if (key == "nt")
        cfg.nt = to_int(key, value);
    else if (key == "windows") {
        cfg.windows.clear();
        for (auto w : split(value, ',')) {
            const auto parts = split(w, ':');
            if (parts.size() != 2)
                throw ConfigError("windows are written start:end,start:end");
            cfg.windows.emplace_back(to_double(key, parts[0]), to_double(key, parts[1]));
        }
    } else if (key == "out")
        cfg.output_dir = std::string(trim(value));
    else if (key == "emit_plots" || key == "emit-plots")
        cfg.emit_plots = to_bool(key, value);
    else if (key == "workers")
        cfg.workers = to_int(key, value);
    else
        throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void apply_config_text(RunConfig& cfg, std::string_view text)
{
    int line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = trim(line.substr(0, hash));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    apply_config_text(cfg, ss.str());
}

void validate(const RunConfig& cfg)
{
    try {
        cfg.trap.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    require(cfg.n_max == 0 || cfg.n_max >= 4, "n_max must be 0 (auto) or >= 4");
    require(std::isfinite(cfg.gamma) && cfg.gamma >= 0.0, "gamma must be non-negative");
    require(cfg.nx >= 3, "nx must be >= 3");
    require(cfg.nt >= 2, "nt must be >= 2");
    require(cfg.workers >= 0, "workers must be >= 0");
    require(!cfg.ratios.empty(), "ratios must not be empty");
    for (double r : cfg.ratios)
        require(std::isfinite(r) && r > 0.0, "ratios must be positive");
    require_increasing(cfg.ratios, "ratios");
    if (cfg.temps) {
        require(!cfg.temps->empty(), "temps must not be empty");
        for (double t : *cfg.temps)
            require(std::isfinite(t) && t >= 0.0, "temps must be non-negative");
        require_increasing(*cfg.temps, "temps");
    }
    double last_end = -1.0;
    require(!cfg.windows.empty(), "at least one time window is needed");
    for (const auto& [a, b] : cfg.windows) {
        require(a >= 0.0 && b > a, "each window needs 0 <= start < end");
        require(a >= last_end, "windows must be increasing and non-overlapping");
        last_end = b;
    }
    if (cfg.subcommand == Subcommand::EntropySweep)
        require(cfg.trap.T > 0.0, "entropy-sweep needs T > 0");
    if (cfg.subcommand == Subcommand::Fig) {
        static constexpr std::array<std::string_view, 5> tags{"all", "fig1b", "fig2", "fig3", "fig4"};
        bool known = false;
        for (auto t : tags)
            known = known || t == cfg.figure_tag;
        require(known, "unknown figure tag '" + cfg.figure_tag + "'");
    }
}

std::vector<double> effective_temps(const RunConfig& cfg, Subcommand sub)
{
    return cfg.temps ? *cfg.temps : default_temps(sub);
}

std::vector<std::string> config_echo(const RunConfig& cfg, Subcommand sub)
{
    std::vector<std::string> lines{
        "L = " + exact(cfg.trap.L),
        "M = " + exact(cfg.trap.M),
        "T = " + exact(cfg.trap.T),
        "hbar = " + exact(cfg.trap.hbar),
        "kB = " + exact(cfg.trap.kB),
        "n_max = " + std::to_string(cfg.n_max),
        "gamma = " + exact(cfg.gamma),
        "ratios = " + join(cfg.ratios),
    };
    if (const auto temps = effective_temps(cfg, sub); !temps.empty())
        lines.push_back("temps = " + join(temps));
    lines.push_back("nx = " + std::to_string(cfg.nx));
    lines.push_back("nt = " + std::to_string(cfg.nt));
    std::string w;
    for (std::size_t i = 0; i < cfg.windows.size(); ++i) {
        if (i)
            w += ',';
        w += exact(cfg.windows[i].first) + ":" + exact(cfg.windows[i].second);
    }
    lines.push_back("windows = " + w);
    return lines;
}

} // namespace boxgas
