#include "meltline/counterfactual.hpp"

#include "meltline/csv.hpp"
#include "meltline/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace meltline {

BestPracticeProfile BestPracticeProfile::fromMatrixRow(const DecisionMatrix& matrix,
                                                       int clusterId) {
    const Eigen::Index row = matrix.rowOf(clusterId);
    if (row < 0)
        fail("NoBestCluster",
             "cluster " + std::to_string(clusterId) + " is not in the decision matrix");
    if (matrix.values.cols() < 3)
        fail("BadMatrix", "decision matrix lacks the foundry criteria");
    BestPracticeProfile best;
    best.clusterId = clusterId;
    best.avgDurationS = matrix.values(row, 0);
    best.avgEnergyKwh = matrix.values(row, 1);
    best.avgKwhPerTonne = matrix.values(row, 2);
    if (!(best.avgDurationS > 0.0) || !(best.avgEnergyKwh > 0.0))
        fail("BadParams", "best-practice averages must be positive");
    return best;
}

BestPracticeProfile selectBestPractice(const DecisionMatrix& matrix,
                                       const RankingTable& rankings) {
    const int id = rankings.unanimousBest ? *rankings.unanimousBest : rankings.consensusBest;
    if (id < 0) fail("NoBestCluster", "ranking produced no best cluster");
    return BestPracticeProfile::fromMatrixRow(matrix, id);
}

CounterfactualReport projectBestPractice(const std::vector<MeltSegment>& segments,
                                         const std::map<int, int>& assignments,
                                         const BestPracticeProfile& best,
                                         const PriceSeries& prices,
                                         const EmissionSeries& emissions, double taxDkkPerKg) {
    if (taxDkkPerKg < 0.0) fail("BadParams", "carbon tax must be non-negative");
    CounterfactualReport report;
    report.bestClusterId = best.clusterId;
    report.taxDkkPerKg = taxDkkPerKg;

    std::vector<const MeltSegment*> ordered;
    ordered.reserve(segments.size());
    for (const auto& seg : segments) ordered.push_back(&seg);
    std::sort(ordered.begin(), ordered.end(),
              [](const MeltSegment* a, const MeltSegment* b) { return a->id < b->id; });

    for (const MeltSegment* seg : ordered) {
        const auto it = assignments.find(seg->id);
        if (it == assignments.end())
            fail("UnassignedMelt", "melt " + std::to_string(seg->id) + " has no cluster");
        PerMeltImpact row;
        row.meltId = seg->id;
        row.cluster = it->second;
        row.actualCostDkk = windowValue(prices, seg->startTime, seg->endTime, seg->energyKwh);
        row.actualCo2Kg = windowValue(emissions, seg->startTime, seg->endTime, seg->energyKwh);
        const double bpEnd = seg->startTime + best.avgDurationS;
        row.bpCostDkk = windowValue(prices, seg->startTime, bpEnd, best.avgEnergyKwh);
        row.bpCo2Kg = windowValue(emissions, seg->startTime, bpEnd, best.avgEnergyKwh);

        report.current.electricityCostDkk += row.actualCostDkk;
        report.current.co2Kg += row.actualCo2Kg;
        report.best.electricityCostDkk += row.bpCostDkk;
        report.best.co2Kg += row.bpCo2Kg;
        report.perMelt.push_back(row);
    }
    report.current.carbonCostDkk = report.current.co2Kg * taxDkkPerKg;
    report.best.carbonCostDkk = report.best.co2Kg * taxDkkPerKg;
    return report;
}

PercentChanges percentChanges(const CounterfactualReport& report) {
    const auto change = [](double current, double best) {
        if (!(current > 0.0)) fail("ZeroBaseline", "current total is not positive");
        return (current - best) / current * 100.0;
    };
    PercentChanges deltas;
    deltas.electricityCost =
        change(report.current.electricityCostDkk, report.best.electricityCostDkk);
    deltas.carbonCost = change(report.current.carbonCostDkk, report.best.carbonCostDkk);
    deltas.co2 = change(report.current.co2Kg, report.best.co2Kg);
    deltas.totalCost = change(report.current.totalCostDkk(), report.best.totalCostDkk());
    return deltas;
}

double roundHalfUp(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::floor(value * scale + 0.5) / scale;
}

void writeSavingsCsv(const CounterfactualReport& report, const std::string& path) {
    const PercentChanges deltas = percentChanges(report);
    CsvTable table;
    table.header = {"row", "electricity_cost_dkk", "carbon_cost_dkk", "co2_kg",
                    "total_cost_dkk"};
    const auto modeRow = [](const char* name, const ModeTotals& t) {
        return std::vector<std::string>{name, formatFixed(t.electricityCostDkk, 2),
                                        formatFixed(t.carbonCostDkk, 2), formatFixed(t.co2Kg, 2),
                                        formatFixed(t.totalCostDkk(), 2)};
    };
    table.rows.push_back(modeRow("current_practice", report.current));
    table.rows.push_back(modeRow("best_practice", report.best));
    table.rows.push_back({"percentage_change", formatFixed(roundHalfUp(deltas.electricityCost, 2), 2),
                          formatFixed(roundHalfUp(deltas.carbonCost, 2), 2),
                          formatFixed(roundHalfUp(deltas.co2, 2), 2),
                          formatFixed(roundHalfUp(deltas.totalCost, 2), 2)});
    writeCsv(path, table);
}

void writePerMeltCsv(const CounterfactualReport& report, const std::string& path) {
    CsvTable table;
    table.header = {"melt_id",        "cluster",       "actual_cost_dkk",
                    "actual_co2_kg",  "bp_cost_dkk",   "bp_co2_kg"};
    for (const auto& row : report.perMelt)
        table.rows.push_back({std::to_string(row.meltId), std::to_string(row.cluster),
                              formatDouble(row.actualCostDkk), formatDouble(row.actualCo2Kg),
                              formatDouble(row.bpCostDkk), formatDouble(row.bpCo2Kg)});
    writeCsv(path, table);
}

std::string savingsJson(const CounterfactualReport& report) {
    const PercentChanges deltas = percentChanges(report);
    nlohmann::json j;
    j["format"] = "meltline/savings/v1";
    j["best_cluster"] = report.bestClusterId;
    j["tax_dkk_per_kg"] = report.taxDkkPerKg;
    const auto mode = [](const ModeTotals& t) {
        return nlohmann::json{{"electricity_cost_dkk", t.electricityCostDkk},
                              {"carbon_cost_dkk", t.carbonCostDkk},
                              {"co2_kg", t.co2Kg},
                              {"total_cost_dkk", t.totalCostDkk()}};
    };
    j["current_practice"] = mode(report.current);
    j["best_practice"] = mode(report.best);
    j["percentage_change"] = {{"electricity_cost_dkk", roundHalfUp(deltas.electricityCost, 2)},
                              {"carbon_cost_dkk", roundHalfUp(deltas.carbonCost, 2)},
                              {"co2_kg", roundHalfUp(deltas.co2, 2)},
                              {"total_cost_dkk", roundHalfUp(deltas.totalCost, 2)}};
    return j.dump(2) + "\n";
}

} // namespace meltline
