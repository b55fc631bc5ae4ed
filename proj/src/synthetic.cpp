#include "meltline/synthetic.hpp"

#include "meltline/csv.hpp"
#include "meltline/error.hpp"

#include <array>
#include <cmath>
#include <random>

namespace meltline {

namespace {

double drawUnit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

double drawGaussian(std::mt19937_64& rng) {
    const double u1 = 1.0 - drawUnit(rng); // (0, 1]
    const double u2 = drawUnit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::mt19937_64 makeEngine(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32), stream};
    return std::mt19937_64(seq);
}

} // namespace

void SyntheticSpec::validate() const {
    if (templates.empty()) fail("BadParams", "need at least one melt template");
    if (meltsPerTemplate < 1) fail("BadParams", "meltsPerTemplate must be >= 1");
    if (!(cadenceS > 0.0)) fail("BadParams", "cadence must be > 0");
    if (!(idleGapS >= cadenceS)) fail("BadParams", "idle gap must cover one sample");
    for (const auto& t : templates) {
        if (!(t.rampDurationS > cadenceS)) fail("BadParams", "ramp shorter than cadence");
        if (!(t.peakTempC > t.startTempC)) fail("BadParams", "peak must exceed start temp");
        if (!(t.weightTonne > 0.0)) fail("BadParams", "weight must be positive");
    }
}

SyntheticResult generateTelemetry(const SyntheticSpec& spec) {
    spec.validate();
    auto rng = makeEngine(spec.seed, 0);

    // Interleave templates 0,1,2,0,1,2,... so clusters are not contiguous runs.
    std::vector<int> order;
    for (int m = 0; m < spec.meltsPerTemplate; ++m)
        for (size_t t = 0; t < spec.templates.size(); ++t)
            order.push_back(static_cast<int>(t));

    SyntheticResult result;
    auto& frame = result.frame;
    frame.fieldNames = {fields::kMeltTemperature, fields::kPower, fields::kEnergyCounter,
                        fields::kMeltWeight,      fields::kVoltage, fields::kCurrent};

    std::vector<double> times;
    std::vector<std::array<double, 6>> rows;
    double t = spec.startTime;
    double counter = 0.0;
    bool firstCycle = true;

    for (const int templateIdx : order) {
        const auto& tpl = spec.templates[static_cast<size_t>(templateIdx)];
        const double range = tpl.peakTempC - spec.idleTempC;
        const double sigma = spec.noiseFraction * range;
        result.truth.templateOf.push_back(templateIdx);
        result.truth.cycleStart.push_back(t);

        // Idle hold. The very first cycle opens the file with it; later cycles
        // open with the drop sample that closed the previous peak.
        const int idleSamples =
            std::max(1, static_cast<int>(std::floor(spec.idleGapS / spec.cadenceS)));
        const int skip = firstCycle ? 0 : 1; // drop row already emitted
        firstCycle = false;
        for (int i = skip; i < idleSamples; ++i) {
            const double temp = spec.idleTempC + sigma * drawGaussian(rng);
            const double power = spec.idlePowerKw * (1.0 + 0.05 * drawGaussian(rng));
            counter += power * spec.cadenceS / kSecondsPerHour;
            times.push_back(t);
            rows.push_back({temp, power, counter, tpl.weightTonne, 400.0, power / 0.4});
            t += spec.cadenceS;
        }

        // Ramp to the pour peak.
        const int rampSamples =
            std::max(2, static_cast<int>(std::floor(tpl.rampDurationS / spec.cadenceS)));
        for (int i = 0; i < rampSamples; ++i) {
            const double phase = static_cast<double>(i) / (rampSamples - 1);
            const double base = tpl.startTempC + (tpl.peakTempC - tpl.startTempC) * phase;
            const double temp = (i == rampSamples - 1)
                                    ? tpl.peakTempC + std::abs(sigma * drawGaussian(rng))
                                    : std::min(base + sigma * drawGaussian(rng),
                                               tpl.peakTempC - 4.0 * sigma);
            const double power = tpl.meltPowerKw * (1.0 + 0.03 * drawGaussian(rng));
            counter += power * spec.cadenceS / kSecondsPerHour;
            times.push_back(t);
            rows.push_back({temp, power, counter, tpl.weightTonne,
                            690.0 + 5.0 * drawGaussian(rng), power / 0.69});
            if (i == rampSamples - 1) result.truth.peakTime.push_back(t);
            t += spec.cadenceS;
        }

        // Drop sample: pour complete, furnace back at idle temperature.
        const double dropTemp = spec.idleTempC + sigma * drawGaussian(rng);
        const double power = spec.idlePowerKw * (1.0 + 0.05 * drawGaussian(rng));
        counter += power * spec.cadenceS / kSecondsPerHour;
        times.push_back(t);
        rows.push_back({dropTemp, power, counter, tpl.weightTonne, 400.0, power / 0.4});
        t += spec.cadenceS;
    }

    frame.timestamps = Eigen::Map<Eigen::VectorXd>(times.data(),
                                                   static_cast<Eigen::Index>(times.size()));
    frame.values.resize(static_cast<Eigen::Index>(rows.size()), 6);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int c = 0; c < 6; ++c)
            frame.values(static_cast<Eigen::Index>(i), c) = rows[i][static_cast<size_t>(c)];

    // Sparse dropout on the electrical columns only, so required fields and
    // the energy counter stay intact.
    auto dropoutRng = makeEngine(spec.seed, 1);
    for (Eigen::Index i = 0; i < frame.rowCount(); ++i)
        for (Eigen::Index c = 4; c < 6; ++c)
            if (drawUnit(dropoutRng) < 0.02) frame.values(i, c) = NAN;

    // Hourly price and intensity covering the span with margin on both sides.
    const double margin = 48.0 * kSecondsPerHour;
    const double seriesStart =
        std::floor((spec.startTime - margin) / kSecondsPerHour) * kSecondsPerHour;
    const Eigen::Index hours =
        static_cast<Eigen::Index>(std::ceil((t + margin - seriesStart) / kSecondsPerHour));
    result.prices.start = seriesStart;
    result.prices.values.resize(hours);
    result.emissions.start = seriesStart;
    result.emissions.values.resize(hours);
    for (Eigen::Index h = 0; h < hours; ++h) {
        const double dayPhase = 2.0 * M_PI * static_cast<double>(h % 24) / 24.0;
        result.prices.values(h) = 0.45 + 0.25 * std::sin(dayPhase - 0.5);
        result.emissions.values(h) = 0.16 + 0.09 * std::sin(dayPhase + 0.9);
    }
    return result;
}

SyntheticSpec defaultDemoSpec() {
    SyntheticSpec spec;
    spec.templates = {
        {3600.0, 900.0, 1480.0, 4200.0, 9.0},
        {5400.0, 880.0, 1530.0, 3600.0, 9.5},
        {7200.0, 860.0, 1580.0, 3200.0, 10.0},
    };
    spec.meltsPerTemplate = 20;
    spec.seed = 7;
    spec.startTime = parseIso8601("2030-03-04T06:00:00Z");
    return spec;
}

ProfileSet generateProfileSet(const ProfileSetSpec& spec) {
    if (spec.instancesPerTemplate < 1) fail("BadParams", "need at least one instance");
    if (spec.length < 2) fail("BadParams", "profile length must be >= 2");
    struct Ramp {
        double startC, endC;
    };
    const std::array<Ramp, 3> ramps = {{{600.0, 1200.0}, {600.0, 1500.0}, {900.0, 1500.0}}};

    auto rng = makeEngine(spec.seed, 2);
    ProfileSet set;
    int meltId = 0;
    for (int instance = 0; instance < spec.instancesPerTemplate; ++instance) {
        for (size_t r = 0; r < ramps.size(); ++r) {
            const double sigma = spec.noiseFraction * (ramps[r].endC - ramps[r].startC);
            ProfileVector p;
            p.meltId = meltId++;
            p.values.resize(spec.length);
            for (int i = 0; i < spec.length; ++i) {
                const double phase = static_cast<double>(i) / (spec.length - 1);
                p.values(i) = ramps[r].startC + (ramps[r].endC - ramps[r].startC) * phase +
                              sigma * drawGaussian(rng);
            }
            set.profiles.push_back(std::move(p));
            set.labels.push_back(static_cast<int>(r));
        }
    }
    return set;
}

void writeTruthCsv(const SyntheticTruth& truth, const std::string& path) {
    CsvTable table;
    table.header = {"cycle", "template", "cycle_start", "peak_time"};
    for (size_t i = 0; i < truth.templateOf.size(); ++i)
        table.rows.push_back({std::to_string(i), std::to_string(truth.templateOf[i]),
                              formatIso8601(truth.cycleStart[i]),
                              formatIso8601(truth.peakTime[i])});
    writeCsv(path, table);
}

} // namespace meltline
