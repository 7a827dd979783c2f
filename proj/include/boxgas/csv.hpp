#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace boxgas {

/// Numeric table with a '#'-prefixed provenance block, written as CSV.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> provenance; // stored without the leading "# "

    void add_row(std::vector<double> row);

    /// Index of a named column; throws std::out_of_range when absent.
    std::size_t column(std::string_view name) const;
    std::vector<double> column_values(std::string_view name) const;

    std::string to_string() const;
    void write(const std::filesystem::path& path) const;

    static CsvTable parse(std::string_view text);
    static CsvTable read(const std::filesystem::path& path);
};

/// 12 significant digits, "nan" for NaN.
std::string format_number(double v);

} // namespace boxgas
