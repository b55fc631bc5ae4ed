#pragma once

#include "meltline/telemetry.hpp"
#include "meltline/time_utils.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace meltline {

struct SegmentationParams {
    /// Temperature the melt must have reached for a drop to count as a pour.
    double minEndpointTempC = 1400.0;
    /// Minimum one-step temperature decrease magnitude.
    double minDropC = 200.0;
    int minSegmentSamples = 10;
    double minSegmentDurationS = 600.0;

    void validate() const;
};

/// One extracted melt: the rows from just after the previous pour through
/// this melt's pour, with its temperature trace and per-melt energy/weight.
struct MeltSegment {
    int id = 0;
    EpochSeconds startTime = 0.0;
    EpochSeconds endTime = 0.0;
    Eigen::VectorXd sampleTimes;  ///< absolute epoch seconds, same length as temperatures
    Eigen::VectorXd temperatures; ///< degC
    double durationS = 0.0;
    double energyKwh = 0.0;
    double weightTonne = 0.0;
    /// Inclusive row range into the source frame; -1 when the segment was
    /// reloaded from disk and the frame is gone.
    Eigen::Index startIndex = -1;
    Eigen::Index endIndex = -1;

    Eigen::Index sampleCount() const { return temperatures.size(); }
};

/// Row i is a melt endpoint iff temperature[i] >= minEndpointTempC and
/// temperature[i+1] - temperature[i] <= -minDropC. Endpoints closer than
/// minSegmentSamples rows to the previously kept endpoint are merged into it.
/// Later rows never affect earlier endpoints.
///
/// Errors: TooFewRows (< 2 rows), MissingTemperature (frame not cleaned).
std::vector<Eigen::Index> detectMeltEndpoints(const TelemetryFrame& frame,
                                              const SegmentationParams& params);

/// Cut the frame at the endpoints and build melt segments. Segment j spans
/// rows endpoint[j-1]+1 .. endpoint[j]; the first segment starts at row 0 and
/// rows after the last endpoint are discarded. Segments with fewer than
/// minSegmentSamples samples or shorter than minSegmentDurationS are dropped.
/// Energy comes from the energy-counter delta when usable, otherwise from
/// trapezoidal integration of power; weight is the last non-missing positive
/// melt weight in the segment.
///
/// Errors: MissingEnergySource, MissingWeight.
std::vector<MeltSegment> extractMelts(const TelemetryFrame& frame,
                                      const std::vector<Eigen::Index>& endpoints,
                                      const SegmentationParams& params);

/// Manifest CSV: id, start_time, end_time, duration_s, energy_kWh, weight_tonne.
void writeSegmentsManifest(const std::vector<MeltSegment>& segments, const std::string& path);

/// One temperature-trace CSV per segment, "melt_<id>.csv" under tracesDir.
void writeSegmentTraces(const std::vector<MeltSegment>& segments, const std::string& tracesDir);

/// Rebuild segments from a manifest plus trace files (startIndex/endIndex
/// come back as -1).
std::vector<MeltSegment> readSegments(const std::string& manifestPath,
                                      const std::string& tracesDir);

std::string segmentTraceFileName(int id);

} // namespace meltline
