#include "meltline/csv.hpp"

#include "meltline/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace meltline {

int CsvTable::columnIndex(std::string_view name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {

void appendRow(std::vector<std::vector<std::string>>& out, std::vector<std::string>& row,
               std::string& cell) {
    row.push_back(std::move(cell));
    cell.clear();
    out.push_back(std::move(row));
    row.clear();
}

} // namespace

CsvTable parseCsv(std::string_view text, char delimiter) {
    // Strip a UTF-8 BOM.
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> row;
    std::string cell;
    bool inQuotes = false;
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (inQuotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    cell += '"';
                    i += 2;
                } else {
                    inQuotes = false;
                    ++i;
                }
            } else {
                cell += c;
                ++i;
            }
        } else if (c == '"') {
            inQuotes = true;
            ++i;
        } else if (c == delimiter) {
            row.push_back(std::move(cell));
            cell.clear();
            ++i;
        } else if (c == '\r') {
            ++i;
        } else if (c == '\n') {
            appendRow(records, row, cell);
            ++i;
        } else {
            cell += c;
            ++i;
        }
    }
    if (inQuotes) fail("CsvParse", "unterminated quoted field");
    if (!cell.empty() || !row.empty()) appendRow(records, row, cell);

    // Drop fully blank records (e.g. trailing newline artifacts).
    std::erase_if(records, [](const std::vector<std::string>& r) {
        return r.size() == 1 && r[0].empty();
    });

    CsvTable table;
    if (records.empty()) return table;
    table.header = std::move(records.front());
    table.rows.assign(std::make_move_iterator(records.begin() + 1),
                      std::make_move_iterator(records.end()));
    return table;
}

CsvTable readCsv(const std::string& path, char delimiter) {
    return parseCsv(readTextFile(path), delimiter);
}

namespace {

bool needsQuoting(const std::string& cell, char delimiter) {
    return cell.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string::npos;
}

void writeCell(std::string& out, const std::string& cell, char delimiter) {
    if (!needsQuoting(cell, delimiter)) {
        out += cell;
        return;
    }
    out += '"';
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

} // namespace

void writeCsv(const std::string& path, const CsvTable& table, char delimiter) {
    std::string out;
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += delimiter;
        writeCell(out, table.header[i], delimiter);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += delimiter;
            writeCell(out, row[i], delimiter);
        }
        out += '\n';
    }
    writeTextFile(path, out);
}

std::string readTextFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("FileOpen", "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void writeTextFile(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("FileOpen", "cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail("FileWrite", "short write to '" + path + "'");
}

std::string formatDouble(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) fail("Format", "to_chars failed");
    return std::string(buf, ptr);
}

std::string formatFixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

bool parseDoubleStrict(std::string_view text, double& out) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

} // namespace meltline
