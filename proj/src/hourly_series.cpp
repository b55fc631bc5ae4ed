#include "meltline/hourly_series.hpp"

#include "meltline/csv.hpp"
#include "meltline/error.hpp"

#include <algorithm>
#include <cmath>

namespace meltline {

bool HourlySeries::covers(EpochSeconds t0, EpochSeconds t1) const {
    return hourCount() > 0 && t0 >= start && t1 <= end();
}

HourlySeries HourlySeries::flat(double value, EpochSeconds start, Eigen::Index hours) {
    if (hours < 1) fail("BadSeries", "series needs at least one hour");
    HourlySeries s;
    s.start = start;
    s.values = Eigen::VectorXd::Constant(hours, value);
    return s;
}

HourlySeries HourlySeries::fromRecords(std::vector<std::pair<EpochSeconds, double>> records,
                                       bool requireNonNegative) {
    if (records.empty()) fail("BadSeries", "series has no records");
    std::sort(records.begin(), records.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    HourlySeries s;
    s.start = records.front().first;
    s.values.resize(static_cast<Eigen::Index>(records.size()));
    constexpr double slack = 1e-6;
    for (size_t i = 0; i < records.size(); ++i) {
        const double expected = s.start + kSecondsPerHour * static_cast<double>(i);
        if (std::abs(records[i].first - expected) > slack)
            fail("BadSeries", "hours are not contiguous at " + formatIso8601(records[i].first));
        if (requireNonNegative && records[i].second < 0.0)
            fail("BadSeries", "negative value at " + formatIso8601(records[i].first));
        s.values(static_cast<Eigen::Index>(i)) = records[i].second;
    }
    return s;
}

HourlySeries HourlySeries::fromCsv(const std::string& path, bool requireNonNegative) {
    const CsvTable table = readCsv(path);
    if (table.header.size() != 2)
        fail("BadSeries", "expected two columns (hour_start, value) in " + path);
    const int hourCol = table.columnIndex("hour_start");
    if (hourCol < 0) fail("BadSeries", "missing hour_start column in " + path);
    const int valueCol = 1 - hourCol;
    std::vector<std::pair<EpochSeconds, double>> records;
    records.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        double value;
        if (!parseDoubleStrict(row[static_cast<size_t>(valueCol)], value))
            fail("BadSeries", "bad value '" + row[static_cast<size_t>(valueCol)] + "' in " + path);
        records.emplace_back(parseIso8601(row[static_cast<size_t>(hourCol)]), value);
    }
    return fromRecords(std::move(records), requireNonNegative);
}

double windowValue(const HourlySeries& series, EpochSeconds t0, EpochSeconds t1,
                   double energyKwh) {
    if (!(t1 > t0)) fail("BadWindow", "window must have positive duration");
    if (!series.covers(t0, t1))
        fail("SeriesGap", "series does not cover [" + formatIso8601(t0) + ", " +
                              formatIso8601(t1) + "]");
    const double duration = t1 - t0;
    const Eigen::Index first =
        static_cast<Eigen::Index>(std::floor((t0 - series.start) / kSecondsPerHour));
    double total = 0.0;
    for (Eigen::Index h = first; h < series.hourCount(); ++h) {
        const double hourStart = series.start + kSecondsPerHour * static_cast<double>(h);
        if (hourStart >= t1) break;
        const double overlap = std::min(t1, hourStart + kSecondsPerHour) - std::max(t0, hourStart);
        if (overlap <= 0.0) continue;
        total += energyKwh * (overlap / duration) * series.values(h);
    }
    return total;
}

void writeHourlySeriesCsv(const HourlySeries& series, const std::string& valueColumn,
                          const std::string& path) {
    CsvTable table;
    table.header = {"hour_start", valueColumn};
    for (Eigen::Index h = 0; h < series.hourCount(); ++h)
        table.rows.push_back(
            {formatIso8601(series.start + kSecondsPerHour * static_cast<double>(h)),
             formatDouble(series.values(h))});
    writeCsv(path, table);
}

} // namespace meltline
