#pragma once

#include "meltline/decision.hpp"
#include "meltline/mcdm.hpp"

#include <map>
#include <string>
#include <vector>

namespace meltline {

// The averages every melt is replayed with in the best-practice scenario.
struct BestPracticeProfile {
    int clusterId = -1;
    double avgDurationS = 0.0;
    double avgEnergyKwh = 0.0;
    double avgKwhPerTonne = 0.0;

    static BestPracticeProfile fromMatrixRow(const DecisionMatrix& matrix, int clusterId);
};

// Unanimous winner when there is one, else the consensus (mean-rank) winner.
BestPracticeProfile selectBestPractice(const DecisionMatrix& matrix,
                                       const RankingTable& rankings);

struct ModeTotals {
    double electricityCostDkk = 0.0;
    double carbonCostDkk = 0.0;
    double co2Kg = 0.0;

    double totalCostDkk() const { return electricityCostDkk + carbonCostDkk; }
};

struct PerMeltImpact {
    int meltId = -1;
    int cluster = -1;
    double actualCostDkk = 0.0;
    double actualCo2Kg = 0.0;
    double bpCostDkk = 0.0;
    double bpCo2Kg = 0.0;
};

struct CounterfactualReport {
    int bestClusterId = -1;
    double taxDkkPerKg = 0.0;
    std::vector<PerMeltImpact> perMelt; // melt id ascending
    ModeTotals current;
    ModeTotals best;
};

// Prices each melt as recorded, then again with every melt (best-cluster
// members included) replaced by the best-practice averages at its recorded
// start time.
CounterfactualReport projectBestPractice(const std::vector<MeltSegment>& segments,
                                         const std::map<int, int>& assignments,
                                         const BestPracticeProfile& best,
                                         const PriceSeries& prices,
                                         const EmissionSeries& emissions, double taxDkkPerKg);

struct PercentChanges {
    double electricityCost = 0.0;
    double carbonCost = 0.0;
    double co2 = 0.0;
    double totalCost = 0.0;
};

// (current - best) / current x 100, full precision; round for display only.
PercentChanges percentChanges(const CounterfactualReport& report);

double roundHalfUp(double value, int decimals);

void writeSavingsCsv(const CounterfactualReport& report, const std::string& path);
void writePerMeltCsv(const CounterfactualReport& report, const std::string& path);
std::string savingsJson(const CounterfactualReport& report);

} // namespace meltline
