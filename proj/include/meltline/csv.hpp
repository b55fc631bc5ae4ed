#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace meltline {

/// A parsed delimiter-separated table: one header row plus data rows of raw
/// string cells. Quoting follows RFC 4180 (double quotes, "" escapes).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column, -1 if absent.
    int columnIndex(std::string_view name) const;
};

CsvTable parseCsv(std::string_view text, char delimiter = ',');
CsvTable readCsv(const std::string& path, char delimiter = ',');
void writeCsv(const std::string& path, const CsvTable& table, char delimiter = ',');

std::string readTextFile(const std::string& path);
void writeTextFile(const std::string& path, std::string_view content);

/// Shortest decimal form that round-trips the exact double.
std::string formatDouble(double v);
/// Fixed-point with the given number of decimals ("%.Nf").
std::string formatFixed(double v, int decimals);
/// Full-string numeric parse; false on trailing garbage or empty input.
bool parseDoubleStrict(std::string_view text, double& out);

} // namespace meltline
