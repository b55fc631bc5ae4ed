#pragma once

#include "meltline/time_utils.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace meltline {

// Gap-free hourly values (spot prices, grid CO2 intensity) starting on an
// arbitrary instant; hour h covers [start + 3600h, start + 3600(h+1)).
struct HourlySeries {
    EpochSeconds start = 0.0;
    Eigen::VectorXd values;

    Eigen::Index hourCount() const { return values.size(); }
    EpochSeconds end() const { return start + kSecondsPerHour * hourCount(); }
    bool covers(EpochSeconds t0, EpochSeconds t1) const;

    static HourlySeries flat(double value, EpochSeconds start, Eigen::Index hours);
    // Records are (hour_start, value); they must tile consecutive hours.
    static HourlySeries fromRecords(std::vector<std::pair<EpochSeconds, double>> records,
                                    bool requireNonNegative = false);
    // Two-column CSV: hour_start (ISO-8601) plus one value column.
    static HourlySeries fromCsv(const std::string& path, bool requireNonNegative = false);
};

using PriceSeries = HourlySeries;
using EmissionSeries = HourlySeries;

// Total value of `energyKwh` spread uniformly over [t0, t1]: each overlapped
// hour contributes energy x (overlap seconds / window seconds) x value.
double windowValue(const HourlySeries& series, EpochSeconds t0, EpochSeconds t1,
                   double energyKwh);

void writeHourlySeriesCsv(const HourlySeries& series, const std::string& valueColumn,
                          const std::string& path);

} // namespace meltline
