#pragma once

#include "meltline/hourly_series.hpp"
#include "meltline/kmeans.hpp"
#include "meltline/segmentation.hpp"

#include <Eigen/Dense>

#include <array>
#include <map>
#include <string>
#include <vector>

namespace meltline {

enum class Direction { Cost, Benefit };

struct CriterionSpec {
    std::string name;
    Direction direction = Direction::Cost;
    double weight = 0.0;
};

// Alternatives (cluster ids) x criteria, the input every ranking method reads.
struct DecisionMatrix {
    std::vector<int> alternatives;
    std::vector<CriterionSpec> criteria;
    Eigen::MatrixXd values;

    Eigen::Index rowOf(int alternativeId) const; // -1 when absent
};

inline constexpr std::array<const char*, 4> kFoundryCriteria = {
    "avg_production_time_s", "avg_electricity_kwh", "avg_kwh_per_tonne", "carbon_tax_dkk"};

struct MeltImpact {
    double costDkk = 0.0;
    double co2Kg = 0.0;
};

// Price and emit the melt's energy uniformly over its duration.
MeltImpact meltCostAndEmissions(const MeltSegment& segment, const PriceSeries& prices,
                                const EmissionSeries& emissions);

// One row per non-empty cluster; four cost criteria: mean duration, mean
// energy, mean per-melt energy intensity (kWh/tonne), mean carbon tax (DKK).
DecisionMatrix buildDecisionMatrix(const std::vector<MeltSegment>& segments,
                                   const std::map<int, int>& assignments,
                                   const EmissionSeries& emissions, double taxDkkPerKg,
                                   const std::vector<double>& weights);

DecisionMatrix buildDecisionMatrix(const std::vector<MeltSegment>& segments,
                                   const ClusterModel& model, const EmissionSeries& emissions,
                                   double taxDkkPerKg, const std::vector<double>& weights);

void writeDecisionMatrixCsv(const DecisionMatrix& matrix, const std::string& path);
// Reads a matrix written by the above; criteria come back cost-direction with
// equal weights (callers override weights when ranking).
DecisionMatrix readDecisionMatrixCsv(const std::string& path);

} // namespace meltline
