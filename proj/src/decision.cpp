#include "meltline/decision.hpp"

#include "meltline/csv.hpp"
#include "meltline/error.hpp"

#include <set>

namespace meltline {

Eigen::Index DecisionMatrix::rowOf(int alternativeId) const {
    for (size_t i = 0; i < alternatives.size(); ++i)
        if (alternatives[i] == alternativeId) return static_cast<Eigen::Index>(i);
    return -1;
}

MeltImpact meltCostAndEmissions(const MeltSegment& segment, const PriceSeries& prices,
                                const EmissionSeries& emissions) {
    MeltImpact impact;
    impact.costDkk = windowValue(prices, segment.startTime, segment.endTime, segment.energyKwh);
    impact.co2Kg = windowValue(emissions, segment.startTime, segment.endTime, segment.energyKwh);
    return impact;
}

DecisionMatrix buildDecisionMatrix(const std::vector<MeltSegment>& segments,
                                   const std::map<int, int>& assignments,
                                   const EmissionSeries& emissions, double taxDkkPerKg,
                                   const std::vector<double>& weights) {
    if (weights.size() != kFoundryCriteria.size())
        fail("BadParams", "expected " + std::to_string(kFoundryCriteria.size()) + " weights");
    double weightSum = 0.0;
    for (const double w : weights) {
        if (w < 0.0) fail("BadParams", "weights must be non-negative");
        weightSum += w;
    }
    if (weightSum <= 0.0) fail("ZeroWeightSum", "criterion weights sum to zero");
    if (segments.empty()) fail("EmptyCluster", "no melts to aggregate");

    std::set<int> clusterIds;
    for (const auto& seg : segments) {
        const auto it = assignments.find(seg.id);
        if (it == assignments.end())
            fail("UnassignedMelt", "melt " + std::to_string(seg.id) + " has no cluster");
        clusterIds.insert(it->second);
    }

    DecisionMatrix matrix;
    matrix.alternatives.assign(clusterIds.begin(), clusterIds.end());
    for (size_t j = 0; j < kFoundryCriteria.size(); ++j)
        matrix.criteria.push_back({kFoundryCriteria[j], Direction::Cost, weights[j] / weightSum});
    matrix.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(matrix.alternatives.size()),
                                          static_cast<Eigen::Index>(kFoundryCriteria.size()));

    Eigen::VectorXd counts = Eigen::VectorXd::Zero(matrix.values.rows());
    for (const auto& seg : segments) {
        const Eigen::Index row = matrix.rowOf(assignments.at(seg.id));
        const double co2 = windowValue(emissions, seg.startTime, seg.endTime, seg.energyKwh);
        matrix.values(row, 0) += seg.durationS;
        matrix.values(row, 1) += seg.energyKwh;
        matrix.values(row, 2) += seg.energyKwh / seg.weightTonne;
        matrix.values(row, 3) += co2 * taxDkkPerKg;
        counts(row) += 1.0;
    }
    matrix.values.array().colwise() /= counts.array();
    return matrix;
}

DecisionMatrix buildDecisionMatrix(const std::vector<MeltSegment>& segments,
                                   const ClusterModel& model, const EmissionSeries& emissions,
                                   double taxDkkPerKg, const std::vector<double>& weights) {
    return buildDecisionMatrix(segments, model.assignmentByMeltId, emissions, taxDkkPerKg,
                               weights);
}

void writeDecisionMatrixCsv(const DecisionMatrix& matrix, const std::string& path) {
    CsvTable table;
    table.header.push_back("cluster");
    for (const auto& criterion : matrix.criteria) table.header.push_back(criterion.name);
    for (size_t i = 0; i < matrix.alternatives.size(); ++i) {
        std::vector<std::string> row{std::to_string(matrix.alternatives[i])};
        for (Eigen::Index j = 0; j < matrix.values.cols(); ++j)
            row.push_back(formatDouble(matrix.values(static_cast<Eigen::Index>(i), j)));
        table.rows.push_back(std::move(row));
    }
    writeCsv(path, table);
}

DecisionMatrix readDecisionMatrixCsv(const std::string& path) {
    const CsvTable table = readCsv(path);
    if (table.header.size() < 2 || table.header[0] != "cluster")
        fail("BadManifest", "decision matrix is malformed: " + path);
    DecisionMatrix matrix;
    const size_t criterionCount = table.header.size() - 1;
    for (size_t j = 0; j < criterionCount; ++j)
        matrix.criteria.push_back(
            {table.header[j + 1], Direction::Cost, 1.0 / static_cast<double>(criterionCount)});
    matrix.values.resize(static_cast<Eigen::Index>(table.rows.size()),
                         static_cast<Eigen::Index>(criterionCount));
    for (size_t i = 0; i < table.rows.size(); ++i) {
        double id;
        if (!parseDoubleStrict(table.rows[i][0], id))
            fail("BadManifest", "bad cluster id in " + path);
        matrix.alternatives.push_back(static_cast<int>(id));
        for (size_t j = 0; j < criterionCount; ++j) {
            double v;
            if (!parseDoubleStrict(table.rows[i][j + 1], v))
                fail("BadManifest", "bad matrix value in " + path);
            matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    }
    return matrix;
}

} // namespace meltline
