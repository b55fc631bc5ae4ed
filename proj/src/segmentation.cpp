#include "meltline/segmentation.hpp"

#include "meltline/csv.hpp"
#include "meltline/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

namespace meltline {

void SegmentationParams::validate() const {
    if (!(minDropC > 0.0)) fail("BadParams", "minDropC must be > 0");
    if (minSegmentSamples < 2) fail("BadParams", "minSegmentSamples must be >= 2");
    if (minSegmentDurationS < 0.0) fail("BadParams", "minSegmentDurationS must be >= 0");
}

std::vector<Eigen::Index> detectMeltEndpoints(const TelemetryFrame& frame,
                                              const SegmentationParams& params) {
    params.validate();
    if (frame.rowCount() < 2) fail("TooFewRows", "need at least 2 rows to detect endpoints");
    const int tempIdx = frame.fieldIndex(fields::kMeltTemperature);
    if (tempIdx < 0) fail("MissingTemperature", "frame has no melt_temperature_C column");
    const auto temp = frame.values.col(tempIdx);
    if (temp.hasNaN())
        fail("MissingTemperature",
             "temperature has missing values; clean the frame before segmenting");

    std::vector<Eigen::Index> endpoints;
    for (Eigen::Index i = 0; i + 1 < frame.rowCount(); ++i) {
        if (temp(i) < params.minEndpointTempC) continue;
        if (temp(i + 1) - temp(i) > -params.minDropC) continue;
        if (!endpoints.empty() && i - endpoints.back() < params.minSegmentSamples)
            continue; // merged into the previous endpoint
        endpoints.push_back(i);
    }
    return endpoints;
}

namespace {

// Counter delta across the segment when the counter behaves (>= 2 readings,
// non-decreasing net), otherwise trapezoidal power integration over
// consecutive non-missing samples. kWh from kW and seconds.
bool counterEnergy(const TelemetryFrame& frame, Eigen::Index lo, Eigen::Index hi, double& out) {
    const int idx = frame.fieldIndex(fields::kEnergyCounter);
    if (idx < 0) return false;
    double first = NAN, last = NAN;
    for (Eigen::Index r = lo; r <= hi; ++r) {
        const double v = frame.values(r, idx);
        if (std::isnan(v)) continue;
        if (std::isnan(first)) first = v;
        last = v;
    }
    if (std::isnan(first) || first == last) {
        // A single reading gives no delta; all-equal readings do (zero).
        if (!std::isnan(first) && first == last) {
            Eigen::Index readings = 0;
            for (Eigen::Index r = lo; r <= hi; ++r)
                if (!std::isnan(frame.values(r, idx))) ++readings;
            if (readings >= 2) {
                out = 0.0;
                return true;
            }
        }
        return false;
    }
    if (last < first) return false; // counter reset mid-segment
    out = last - first;
    return true;
}

bool powerEnergy(const TelemetryFrame& frame, Eigen::Index lo, Eigen::Index hi, double& out) {
    const int idx = frame.fieldIndex(fields::kPower);
    if (idx < 0) return false;
    double acc = 0.0;
    Eigen::Index prev = -1;
    Eigen::Index used = 0;
    for (Eigen::Index r = lo; r <= hi; ++r) {
        const double v = frame.values(r, idx);
        if (std::isnan(v)) continue;
        if (prev >= 0) {
            const double dt = frame.timestamps(r) - frame.timestamps(prev);
            acc += dt * (frame.values(prev, idx) + v) * 0.5;
        }
        prev = r;
        ++used;
    }
    if (used < 2) return false;
    out = std::max(0.0, acc / kSecondsPerHour);
    return true;
}

} // namespace

std::vector<MeltSegment> extractMelts(const TelemetryFrame& frame,
                                      const std::vector<Eigen::Index>& endpoints,
                                      const SegmentationParams& params) {
    params.validate();
    const int tempIdx = frame.fieldIndex(fields::kMeltTemperature);
    if (tempIdx < 0) fail("MissingTemperature", "frame has no melt_temperature_C column");
    const int weightIdx = frame.fieldIndex(fields::kMeltWeight);

    std::vector<MeltSegment> segments;
    Eigen::Index start = 0;
    int nextId = 0;
    for (const Eigen::Index end : endpoints) {
        const Eigen::Index lo = start;
        const Eigen::Index hi = end;
        start = end + 1;
        const Eigen::Index count = hi - lo + 1;
        if (count < params.minSegmentSamples) continue;
        const double duration = frame.timestamps(hi) - frame.timestamps(lo);
        if (duration < params.minSegmentDurationS) continue;

        MeltSegment seg;
        seg.id = nextId++;
        seg.startIndex = lo;
        seg.endIndex = hi;
        seg.startTime = frame.timestamps(lo);
        seg.endTime = frame.timestamps(hi);
        seg.durationS = duration;
        seg.sampleTimes = frame.timestamps.segment(lo, count);
        seg.temperatures = frame.values.col(tempIdx).segment(lo, count);

        if (!counterEnergy(frame, lo, hi, seg.energyKwh) &&
            !powerEnergy(frame, lo, hi, seg.energyKwh))
            fail("MissingEnergySource",
                 "segment " + std::to_string(seg.id) + " has neither a usable energy counter "
                 "nor power samples");

        double weight = NAN;
        if (weightIdx >= 0) {
            for (Eigen::Index r = hi; r >= lo; --r) {
                const double v = frame.values(r, weightIdx);
                if (!std::isnan(v) && v > 0.0) {
                    weight = v;
                    break;
                }
            }
        }
        if (std::isnan(weight))
            fail("MissingWeight",
                 "segment " + std::to_string(seg.id) + " has no positive melt weight sample");
        seg.weightTonne = weight;

        segments.push_back(std::move(seg));
    }
    return segments;
}

std::string segmentTraceFileName(int id) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "melt_%04d.csv", id);
    return buf;
}

void writeSegmentsManifest(const std::vector<MeltSegment>& segments, const std::string& path) {
    CsvTable table;
    table.header = {"id", "start_time", "end_time", "duration_s", "energy_kWh", "weight_tonne"};
    for (const auto& seg : segments) {
        table.rows.push_back({std::to_string(seg.id), formatIso8601(seg.startTime),
                              formatIso8601(seg.endTime), formatDouble(seg.durationS),
                              formatDouble(seg.energyKwh), formatDouble(seg.weightTonne)});
    }
    writeCsv(path, table);
}

void writeSegmentTraces(const std::vector<MeltSegment>& segments, const std::string& tracesDir) {
    std::filesystem::create_directories(tracesDir);
    for (const auto& seg : segments) {
        CsvTable table;
        table.header = {"timestamp", "melt_temperature_C"};
        for (Eigen::Index i = 0; i < seg.sampleCount(); ++i)
            table.rows.push_back(
                {formatIso8601(seg.sampleTimes(i)), formatDouble(seg.temperatures(i))});
        writeCsv((std::filesystem::path(tracesDir) / segmentTraceFileName(seg.id)).string(),
                 table);
    }
}

std::vector<MeltSegment> readSegments(const std::string& manifestPath,
                                      const std::string& tracesDir) {
    const CsvTable manifest = readCsv(manifestPath);
    const int idCol = manifest.columnIndex("id");
    const int startCol = manifest.columnIndex("start_time");
    const int endCol = manifest.columnIndex("end_time");
    const int durCol = manifest.columnIndex("duration_s");
    const int energyCol = manifest.columnIndex("energy_kWh");
    const int weightCol = manifest.columnIndex("weight_tonne");
    if (idCol < 0 || startCol < 0 || endCol < 0 || durCol < 0 || energyCol < 0 || weightCol < 0)
        fail("BadManifest", "segments manifest is missing columns: " + manifestPath);

    std::vector<MeltSegment> segments;
    for (const auto& row : manifest.rows) {
        MeltSegment seg;
        double id;
        if (!parseDoubleStrict(row[idCol], id)) fail("BadManifest", "bad id in " + manifestPath);
        seg.id = static_cast<int>(id);
        seg.startTime = parseIso8601(row[startCol]);
        seg.endTime = parseIso8601(row[endCol]);
        if (!parseDoubleStrict(row[durCol], seg.durationS) ||
            !parseDoubleStrict(row[energyCol], seg.energyKwh) ||
            !parseDoubleStrict(row[weightCol], seg.weightTonne))
            fail("BadManifest", "bad numeric cell in " + manifestPath);

        const CsvTable trace = readCsv(
            (std::filesystem::path(tracesDir) / segmentTraceFileName(seg.id)).string());
        const int ts = trace.columnIndex("timestamp");
        const int temp = trace.columnIndex("melt_temperature_C");
        if (ts < 0 || temp < 0)
            fail("BadManifest", "trace for segment " + std::to_string(seg.id) + " is malformed");
        seg.sampleTimes.resize(static_cast<Eigen::Index>(trace.rows.size()));
        seg.temperatures.resize(static_cast<Eigen::Index>(trace.rows.size()));
        for (size_t i = 0; i < trace.rows.size(); ++i) {
            seg.sampleTimes(static_cast<Eigen::Index>(i)) = parseIso8601(trace.rows[i][ts]);
            double v;
            if (!parseDoubleStrict(trace.rows[i][temp], v))
                fail("BadManifest", "bad temperature in trace for segment " +
                                        std::to_string(seg.id));
            seg.temperatures(static_cast<Eigen::Index>(i)) = v;
        }
        segments.push_back(std::move(seg));
    }
    return segments;
}

} // namespace meltline
