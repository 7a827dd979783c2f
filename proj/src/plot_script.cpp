#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include "boxgas/figures.hpp"

namespace boxgas {

namespace {

std::string preamble(const CsvTable& table, const std::string& csv_name)
{
    const auto png = std::filesystem::path(csv_name).replace_extension(".png").string();
    std::ostringstream os;
    os << "# " << version_string << " plot script for " << csv_name << "\n"
       << "# usage: gnuplot " << std::filesystem::path(csv_name).replace_extension(".plot").string() << "\n"
       << "set datafile separator ','\n"
       << "set datafile commentschars '#'\n"
       << "set terminal pngcairo size 900,650 enhanced\n"
       << "set output '" << png << "'\n"
       << "data = '" << csv_name << "'\n"
       << "skiplines = " << table.provenance.size() + 1 << "\n";
    return os.str();
}

} // namespace

std::string emit_plot_script(const CsvTable& table, const std::string& style, const std::string& csv_name)
{
    std::ostringstream os;
    os << preamble(table, csv_name);
    if (style == "fig1b") {
        os << "set logscale x\n"
           << "set xlabel 'L / {/Symbol l}_T'\n"
           << "set ylabel '{/Symbol D}S  (k_B)'\n"
           << "set key top right\n"
           << "plot data skip skiplines using 1:2 with linespoints pt 6 lc rgb '#1f77b4' title 'free expansion', \\\n"
           << "     data skip skiplines using 1:3 with linespoints pt 8 lc rgb '#ff7f0e' title 'isothermal expansion', \\\n"
           << "     data skip skiplines using 1:4 with lines dt 2 lc rgb 'gray' title 'k_B ln 2'\n";
    } else if (style == "fig2") {
        os << "set xlabel 'quantum number m'\n"
           << "set ylabel 'D_m'\n"
           << "set xrange [0:40]\n"
           << "set yrange [0:*]\n"
           << "plot data skip skiplines using 1:(int($1)%2==0 ? $2 : 1/0) with points pt 7 lc rgb '#1f77b4' title 'even m', \\\n"
           << "     data skip skiplines using 1:(int($1)%2==1 ? $2 : 1/0) with points pt 5 lc rgb '#d62728' title 'odd m', \\\n"
           << "     data skip skiplines using 1:3 with lines dt 2 lc rgb 'gray' title 'thermal, e^{-qm^2/4}/(2Z)'\n";
    } else if (style == "fig3") {
        std::set<double> temps;
        if (!table.header.empty())
            for (const auto& r : table.rows)
                temps.insert(r[0]);
        os << "set xlabel 'x / L'\n"
           << "set ylabel 't  ({/Symbol \\150}/{/Symbol a})'\n"
           << "set cblabel 'p(x,t)'\n"
           << "set palette rgb 33,13,10\n"
           << "set multiplot layout 1," << std::max<std::size_t>(1, temps.size()) << "\n";
        for (double T : temps) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", T);
            os << "set title 'T = " << buf << "'\n"
               << "plot data skip skiplines using 3:($1==" << buf << " ? $2 : 1/0):4 with points pt 5 ps 0.3 lc palette notitle\n";
        }
        os << "unset multiplot\n";
    } else if (style == "fig3_steady") {
        os << "set xlabel 'x / L'\n"
           << "set ylabel 'p(x)'\n"
           << "plot data skip skiplines using 1:2 with lines lw 2 lc rgb '#1f77b4' title 'after free expansion', \\\n"
           << "     data skip skiplines using 1:3 with lines dt 2 lw 2 lc rgb '#ff7f0e' title 'equilibrium'\n";
    } else if (style == "fig4") {
        os << "set xlabel 'E  ({/Symbol a})'\n"
           << "set ylabel 'S  (k_B)'\n"
           << "set logscale x\n"
           << "set key bottom right\n"
           << "plot data skip skiplines using 2:3 with linespoints pt 8 lc rgb '#ff7f0e' title 'free expansion', \\\n"
           << "     data skip skiplines using 4:5 with linespoints pt 6 lc rgb '#1f77b4' title 'isothermal expansion', \\\n"
           << "     " << zero_temperature_entropy_marker << " with lines dt 2 lc rgb 'gray' title 'C = "
           << zero_temperature_entropy_marker << "'\n";
    } else {
        os << "plot data skip skiplines using 1:2 with lines notitle\n";
    }
    return os.str();
}

} // namespace boxgas
