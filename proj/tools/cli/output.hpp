#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace semiwave::cli {

extern const char* const version_string;

// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// %.17g, with nan/inf spelled out.
std::string format_number(double x);

class CsvTable {
public:
    CsvTable(std::vector<std::string> columns, std::string config_hash);
    void add_row(const std::vector<double>& row);
    std::string str() const;

private:
    std::vector<std::string> columns_;
    std::string hash_;
    std::string body_;
};

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    // Draws y = 0 when it lies inside the range.
    bool zero_line = false;
};

std::string svg_line_chart(const ChartSpec& spec, const std::vector<Series>& series);

} // namespace semiwave::cli
