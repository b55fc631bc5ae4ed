#pragma once

#include "meltline/time_utils.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace meltline {

/// Canonical furnace field names. Cooling-water fields are families: schemas
/// may map any number of measuring points as "cooling_water_temp_C[0]",
/// "cooling_water_temp_C[1]", ..., likewise for flow.
namespace fields {
inline constexpr const char* kTimestamp = "timestamp";
inline constexpr const char* kMeltTemperature = "melt_temperature_C";
inline constexpr const char* kMeltWeight = "melt_weight_tonne";
inline constexpr const char* kPower = "power_kW";
inline constexpr const char* kEnergyCounter = "energy_counter_kWh";
inline constexpr const char* kVoltage = "voltage_V";
inline constexpr const char* kCurrent = "current_A";
inline constexpr const char* kFrequency = "frequency_Hz";
inline constexpr const char* kFurnaceState = "furnace_state";
inline constexpr const char* kCoolingWaterTemp = "cooling_water_temp_C";
inline constexpr const char* kCoolingWaterFlow = "cooling_water_flow";
} // namespace fields

/// True for a fixed canonical name or an indexed cooling-water family member.
bool isCanonicalField(const std::string& name);

/// The scalar (non-family) canonical field names, in canonical order.
const std::vector<std::string>& scalarCanonicalFields();

struct TelemetrySchema {
    /// canonical field name -> source column name
    std::map<std::string, std::string> columnMap;
    /// Canonical names that must be present in the source file. Always
    /// includes timestamp and melt_temperature_C regardless of what the
    /// caller lists.
    std::set<std::string> required;

    /// Identity mapping over the given canonical fields (timestamp implied).
    static TelemetrySchema canonical(const std::vector<std::string>& fieldNames);

    /// Throws on unknown canonical names, duplicate source columns, or
    /// required names that are not mapped.
    void validate() const;

    std::set<std::string> effectiveRequired() const;
};

/// Immutable after construction; value cells use NaN for missing.
struct TelemetryFrame {
    Eigen::VectorXd timestamps;          ///< epoch seconds, strictly increasing
    std::vector<std::string> fieldNames; ///< value columns, canonical names
    Eigen::MatrixXd values;              ///< rowCount x fieldNames.size()

    // metadata
    std::string sourcePath;
    std::int64_t unparseableCells = 0;
    std::int64_t deduplicatedRows = 0;
    std::vector<std::string> absentOptionalColumns;

    Eigen::Index rowCount() const { return timestamps.size(); }
    int fieldIndex(std::string_view name) const;
    bool hasField(std::string_view name) const { return fieldIndex(name) >= 0; }
    double timeSpanSeconds() const;
};

struct CompletenessReport {
    std::map<std::string, double> perField; ///< fraction present in [0,1]
    std::int64_t totalRows = 0;
};

/// Load a telemetry CSV. Rows come back sorted by timestamp; duplicate
/// timestamps with identical values are deduplicated, conflicting duplicates
/// are an error. Missing-value encodings: empty cell, "NaN", "nan", "null"
/// (case-insensitive). Other unparseable numeric cells become missing and are
/// counted in the frame metadata.
///
/// Errors: MissingColumn (required source column absent), EmptyFile,
/// NonMonotonicTime, BadTimestamp.
TelemetryFrame loadTelemetry(const std::string& path, const TelemetrySchema& schema,
                             char delimiter = ',');

/// Errors: EmptyFrame.
CompletenessReport completenessReport(const TelemetryFrame& frame);

/// Drop the given value columns entirely and drop any row missing a value for
/// a field in requirePresent. Row order is preserved; idempotent. Naming a
/// field the frame does not have in requirePresent drops every row. The
/// timestamp column is not droppable and is always present.
TelemetryFrame cleanTelemetry(const TelemetryFrame& frame, const std::set<std::string>& dropFields,
                              const std::set<std::string>& requirePresent);

/// Canonical CSV serialization (timestamp column plus fieldNames, shortest
/// round-trip numeric formatting). loadTelemetry on the result with a
/// canonical schema reproduces the row set exactly.
void writeTelemetryCsv(const TelemetryFrame& frame, const std::string& path);

/// Reload a canonical CSV produced by writeTelemetryCsv: the schema is the
/// identity over the file's own header.
TelemetryFrame loadCanonicalTelemetry(const std::string& path);

std::string completenessJson(const CompletenessReport& report);
std::string completenessTable(const CompletenessReport& report);

} // namespace meltline
