#include "meltline/telemetry.hpp"

#include "meltline/csv.hpp"
#include "meltline/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace meltline {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string lowered(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trimmed(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool isMissingEncoding(std::string_view cell) {
    const std::string low = lowered(trimmed(cell));
    return low.empty() || low == "nan" || low == "null";
}

bool isFamilyMember(const std::string& name, const std::string& family) {
    // family, or family[idx]
    if (name == family) return true;
    if (name.size() > family.size() + 2 && name.compare(0, family.size(), family) == 0 &&
        name[family.size()] == '[' && name.back() == ']') {
        for (size_t i = family.size() + 1; i + 1 < name.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
        return true;
    }
    return false;
}

} // namespace

const std::vector<std::string>& scalarCanonicalFields() {
    static const std::vector<std::string> names = {
        fields::kMeltTemperature, fields::kMeltWeight,  fields::kPower,
        fields::kEnergyCounter,   fields::kVoltage,     fields::kCurrent,
        fields::kFrequency,       fields::kFurnaceState};
    return names;
}

bool isCanonicalField(const std::string& name) {
    if (name == fields::kTimestamp) return true;
    const auto& scalars = scalarCanonicalFields();
    if (std::find(scalars.begin(), scalars.end(), name) != scalars.end()) return true;
    return isFamilyMember(name, fields::kCoolingWaterTemp) ||
           isFamilyMember(name, fields::kCoolingWaterFlow);
}

TelemetrySchema TelemetrySchema::canonical(const std::vector<std::string>& fieldNames) {
    TelemetrySchema schema;
    schema.columnMap[fields::kTimestamp] = fields::kTimestamp;
    for (const auto& name : fieldNames)
        if (name != fields::kTimestamp) schema.columnMap[name] = name;
    schema.required = {fields::kTimestamp, fields::kMeltTemperature};
    return schema;
}

std::set<std::string> TelemetrySchema::effectiveRequired() const {
    std::set<std::string> out = required;
    out.insert(fields::kTimestamp);
    out.insert(fields::kMeltTemperature);
    return out;
}

void TelemetrySchema::validate() const {
    std::set<std::string> sources;
    for (const auto& [canonical, source] : columnMap) {
        if (!isCanonicalField(canonical))
            fail("BadSchema", "unknown canonical field '" + canonical + "'");
        if (!sources.insert(source).second)
            fail("BadSchema", "source column '" + source + "' mapped twice");
    }
    for (const auto& name : effectiveRequired())
        if (!columnMap.count(name))
            fail("BadSchema", "required field '" + name + "' has no source column");
}

int TelemetryFrame::fieldIndex(std::string_view name) const {
    for (size_t i = 0; i < fieldNames.size(); ++i)
        if (fieldNames[i] == name) return static_cast<int>(i);
    return -1;
}

double TelemetryFrame::timeSpanSeconds() const {
    return rowCount() > 0 ? timestamps(rowCount() - 1) - timestamps(0) : 0.0;
}

TelemetryFrame loadTelemetry(const std::string& path, const TelemetrySchema& schema,
                             char delimiter) {
    schema.validate();
    const CsvTable csv = readCsv(path, delimiter);
    if (csv.header.empty() || csv.rows.empty()) fail("EmptyFile", "'" + path + "' has no data rows");

    const auto required = schema.effectiveRequired();

    TelemetryFrame frame;
    frame.sourcePath = path;

    // Resolve source columns. Required absences are fatal; optional absences
    // leave the field all-missing and are recorded.
    struct FieldSource {
        std::string name;
        int column; // -1 if absent from the file
    };
    int timestampColumn = -1;
    std::vector<FieldSource> valueFields;
    for (const auto& [canonical, source] : schema.columnMap) {
        const int col = csv.columnIndex(source);
        if (canonical == fields::kTimestamp) {
            if (col < 0) fail("MissingColumn", source);
            timestampColumn = col;
            continue;
        }
        if (col < 0) {
            if (required.count(canonical)) fail("MissingColumn", source);
            frame.absentOptionalColumns.push_back(canonical);
        }
        valueFields.push_back({canonical, col});
    }

    const Eigen::Index nRows = static_cast<Eigen::Index>(csv.rows.size());
    const Eigen::Index nFields = static_cast<Eigen::Index>(valueFields.size());
    Eigen::VectorXd times(nRows);
    Eigen::MatrixXd values(nRows, nFields);

    for (Eigen::Index r = 0; r < nRows; ++r) {
        const auto& row = csv.rows[static_cast<size_t>(r)];
        if (static_cast<size_t>(timestampColumn) >= row.size())
            fail("BadTimestamp", "row " + std::to_string(r + 2) + " has no timestamp cell");
        times(r) = parseIso8601(row[static_cast<size_t>(timestampColumn)]);
        for (Eigen::Index f = 0; f < nFields; ++f) {
            const int col = valueFields[static_cast<size_t>(f)].column;
            if (col < 0 || static_cast<size_t>(col) >= row.size()) {
                values(r, f) = kNan;
                continue;
            }
            const std::string& cell = row[static_cast<size_t>(col)];
            if (isMissingEncoding(cell)) {
                values(r, f) = kNan;
                continue;
            }
            double v;
            if (parseDoubleStrict(cell, v)) {
                values(r, f) = v;
            } else {
                values(r, f) = kNan;
                ++frame.unparseableCells;
            }
        }
    }

    // Stable sort by timestamp, then collapse duplicates.
    std::vector<Eigen::Index> order(static_cast<size_t>(nRows));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return times(a) < times(b); });

    auto sameRow = [&](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index f = 0; f < nFields; ++f) {
            const double va = values(a, f), vb = values(b, f);
            const bool na = std::isnan(va), nb = std::isnan(vb);
            if (na != nb) return false;
            if (!na && va != vb) return false;
        }
        return true;
    };

    std::vector<Eigen::Index> kept;
    kept.reserve(order.size());
    for (size_t i = 0; i < order.size(); ++i) {
        if (!kept.empty() && times(order[i]) == times(kept.back())) {
            if (!sameRow(order[i], kept.back()))
                fail("NonMonotonicTime", "conflicting rows share timestamp " +
                                             formatIso8601(times(order[i])));
            ++frame.deduplicatedRows;
            continue;
        }
        kept.push_back(order[i]);
    }

    frame.timestamps.resize(static_cast<Eigen::Index>(kept.size()));
    frame.values.resize(static_cast<Eigen::Index>(kept.size()), nFields);
    for (size_t i = 0; i < kept.size(); ++i) {
        frame.timestamps(static_cast<Eigen::Index>(i)) = times(kept[i]);
        frame.values.row(static_cast<Eigen::Index>(i)) = values.row(kept[i]);
    }
    frame.fieldNames.reserve(valueFields.size());
    for (const auto& f : valueFields) frame.fieldNames.push_back(f.name);
    return frame;
}

CompletenessReport completenessReport(const TelemetryFrame& frame) {
    if (frame.rowCount() == 0) fail("EmptyFrame", "completeness of an empty frame is undefined");
    CompletenessReport report;
    report.totalRows = frame.rowCount();
    for (size_t f = 0; f < frame.fieldNames.size(); ++f) {
        const auto col = frame.values.col(static_cast<Eigen::Index>(f)).array();
        const Eigen::Index present = (col == col).count(); // NaN != NaN
        report.perField[frame.fieldNames[f]] =
            static_cast<double>(present) / static_cast<double>(frame.rowCount());
    }
    return report;
}

TelemetryFrame cleanTelemetry(const TelemetryFrame& frame, const std::set<std::string>& dropFields,
                              const std::set<std::string>& requirePresent) {
    TelemetryFrame out;
    out.sourcePath = frame.sourcePath;
    out.unparseableCells = frame.unparseableCells;
    out.deduplicatedRows = frame.deduplicatedRows;

    std::vector<Eigen::Index> keepFields;
    for (size_t f = 0; f < frame.fieldNames.size(); ++f) {
        if (dropFields.count(frame.fieldNames[f])) continue;
        keepFields.push_back(static_cast<Eigen::Index>(f));
        out.fieldNames.push_back(frame.fieldNames[f]);
    }
    for (const auto& name : frame.absentOptionalColumns)
        if (!dropFields.count(name)) out.absentOptionalColumns.push_back(name);

    std::vector<int> requireIdx;
    bool unsatisfiable = false;
    for (const auto& name : requirePresent) {
        if (name == fields::kTimestamp) continue; // every row has one
        const int idx = frame.fieldIndex(name);
        if (idx < 0)
            unsatisfiable = true; // field absent entirely: every row is missing it
        else
            requireIdx.push_back(idx);
    }

    std::vector<Eigen::Index> keepRows;
    if (!unsatisfiable) {
        for (Eigen::Index r = 0; r < frame.rowCount(); ++r) {
            bool ok = true;
            for (int idx : requireIdx)
                if (std::isnan(frame.values(r, idx))) {
                    ok = false;
                    break;
                }
            if (ok) keepRows.push_back(r);
        }
    }

    out.timestamps.resize(static_cast<Eigen::Index>(keepRows.size()));
    out.values.resize(static_cast<Eigen::Index>(keepRows.size()),
                      static_cast<Eigen::Index>(keepFields.size()));
    for (size_t i = 0; i < keepRows.size(); ++i) {
        out.timestamps(static_cast<Eigen::Index>(i)) = frame.timestamps(keepRows[i]);
        for (size_t j = 0; j < keepFields.size(); ++j)
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                frame.values(keepRows[i], keepFields[j]);
    }
    return out;
}

void writeTelemetryCsv(const TelemetryFrame& frame, const std::string& path) {
    CsvTable table;
    table.header.push_back(fields::kTimestamp);
    for (const auto& name : frame.fieldNames) table.header.push_back(name);
    table.rows.reserve(static_cast<size_t>(frame.rowCount()));
    for (Eigen::Index r = 0; r < frame.rowCount(); ++r) {
        std::vector<std::string> row;
        row.reserve(frame.fieldNames.size() + 1);
        row.push_back(formatIso8601(frame.timestamps(r)));
        for (Eigen::Index f = 0; f < frame.values.cols(); ++f) {
            const double v = frame.values(r, f);
            row.push_back(std::isnan(v) ? std::string() : formatDouble(v));
        }
        table.rows.push_back(std::move(row));
    }
    writeCsv(path, table);
}

TelemetryFrame loadCanonicalTelemetry(const std::string& path) {
    const CsvTable csv = readCsv(path);
    std::vector<std::string> names;
    for (const auto& col : csv.header)
        if (col != fields::kTimestamp) names.push_back(col);
    return loadTelemetry(path, TelemetrySchema::canonical(names));
}

std::string completenessJson(const CompletenessReport& report) {
    nlohmann::json fields = nlohmann::json::object();
    for (const auto& [name, fraction] : report.perField)
        fields[name] = std::round(fraction * 1e6) / 1e6; // reported at 6 decimal places
    nlohmann::json doc{{"format", "meltline/completeness/v1"},
                       {"total_rows", report.totalRows},
                       {"fields", fields}};
    return doc.dump(2) + "\n";
}

std::string completenessTable(const CompletenessReport& report) {
    size_t width = 5;
    for (const auto& [name, _] : report.perField) width = std::max(width, name.size());
    std::ostringstream out;
    out << "rows: " << report.totalRows << "\n";
    for (const auto& [name, fraction] : report.perField) {
        out << name << std::string(width - name.size() + 2, ' ') << formatFixed(fraction, 6)
            << "\n";
    }
    return out.str();
}

} // namespace meltline
