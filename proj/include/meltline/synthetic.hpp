#pragma once

#include "meltline/hourly_series.hpp"
#include "meltline/profiles.hpp"
#include "meltline/telemetry.hpp"

#include <cstdint>
#include <vector>

namespace meltline {

// Shape of one synthetic melt cycle: idle hold, then a ramp to the pour peak.
struct MeltTemplate {
    double rampDurationS = 3600.0;
    double startTempC = 850.0;
    double peakTempC = 1500.0;
    double meltPowerKw = 4000.0;
    double weightTonne = 9.0;
};

struct SyntheticSpec {
    std::vector<MeltTemplate> templates;
    int meltsPerTemplate = 20;
    double cadenceS = 30.0;
    double idleGapS = 1800.0;
    double idleTempC = 850.0;
    double idlePowerKw = 150.0;
    double noiseFraction = 0.01; // sigma relative to each template's range
    std::uint64_t seed = 0;
    EpochSeconds startTime = 0.0;

    void validate() const;
};

struct SyntheticTruth {
    // Per cycle, in telemetry order: which template produced it.
    std::vector<int> templateOf;
    std::vector<EpochSeconds> cycleStart; // first row of the cycle
    std::vector<EpochSeconds> peakTime;   // endpoint row
};

struct SyntheticResult {
    TelemetryFrame frame;
    SyntheticTruth truth;
    PriceSeries prices;       // covers the span plus margin for replays
    EmissionSeries emissions;
};

SyntheticResult generateTelemetry(const SyntheticSpec& spec);

SyntheticSpec defaultDemoSpec();

// Labeled fixed-length ramp profiles for clustering tests: three linear
// templates with distinct value ranges, Gaussian noise per instance.
struct ProfileSetSpec {
    int instancesPerTemplate = 20;
    int length = 128;
    double noiseFraction = 0.01;
    std::uint64_t seed = 0;
};

struct ProfileSet {
    std::vector<ProfileVector> profiles;
    std::vector<int> labels;
};

ProfileSet generateProfileSet(const ProfileSetSpec& spec);

void writeTruthCsv(const SyntheticTruth& truth, const std::string& path);

} // namespace meltline
