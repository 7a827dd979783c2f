#include "boxgas/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace boxgas {

namespace {

// strtod rather than stod: subnormal values such as 8e-310 are legal output.
double parse_number(const std::string& f)
{
    if (f == "nan")
        return std::nan("");
    char* end = nullptr;
    const double v = std::strtod(f.c_str(), &end);
    if (f.empty() || end != f.c_str() + f.size())
        throw std::invalid_argument("CsvTable: bad number '" + f + "'");
    return v;
}

} // namespace

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void CsvTable::add_row(std::vector<double> row)
{
    if (row.size() != header.size())
        throw std::invalid_argument("CsvTable: row width does not match the header");
    rows.push_back(std::move(row));
}

std::size_t CsvTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw std::out_of_range("CsvTable: no column " + std::string(name));
}

std::vector<double> CsvTable::column_values(std::string_view name) const
{
    const auto c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows)
        out.push_back(r[c]);
    return out;
}

std::string CsvTable::to_string() const
{
    std::string out;
    for (const auto& line : provenance) {
        out += "# ";
        out += line;
        out += '\n';
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i)
            out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << to_string();
    if (!os)
        throw std::runtime_error("failed writing " + path.string());
}

CsvTable CsvTable::parse(std::string_view text)
{
    CsvTable table;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty())
            continue;
        if (line.front() == '#') {
            auto body = line.substr(1);
            if (!body.empty() && body.front() == ' ')
                body.remove_prefix(1);
            table.provenance.emplace_back(body);
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss{std::string(line)};
        for (std::string f; std::getline(ss, f, ',');)
            fields.push_back(f);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields)
            row.push_back(parse_number(f));
        table.add_row(std::move(row));
    }
    return table;
}

CsvTable CsvTable::read(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str());
}

} // namespace boxgas
