#pragma once

#include "meltline/distances.hpp"
#include "meltline/profiles.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace meltline {

struct FitParams {
    int k = 3;
    Metric metric;
    std::uint64_t seed = 0;
    int nInit = 10;
    int maxIter = 100;
    double tol = 1e-4; // max centroid displacement, degrees C

    void validate() const;
};

struct ClusterModel {
    int k = 0;
    Metric metric;
    Eigen::MatrixXd centroids; // k x L
    std::vector<int> assignments; // by profile position
    std::map<int, int> assignmentByMeltId;
    std::uint64_t seed = 0;
    int iterationsRun = 0;
    bool converged = false;
    double inertia = 0.0;
    // Inertia at every assignment step of the winning run, final value last.
    std::vector<double> inertiaTrace;
};

ClusterModel fitKMeans(const std::vector<ProfileVector>& profiles, const FitParams& params);

Eigen::MatrixXd pairwiseDistances(const Eigen::MatrixXd& profiles, const Metric& metric);

double silhouetteFromDistances(const Eigen::MatrixXd& distances,
                               const std::vector<int>& assignments, int k);

double silhouetteScore(const std::vector<ProfileVector>& profiles,
                       const std::vector<int>& assignments, int k, const Metric& metric);

struct QualityMetrics {
    double inertia = 0.0;
    double distortion = 0.0;
    std::optional<double> silhouette; // absent when k = 1
};

QualityMetrics qualityMetrics(const ClusterModel& model,
                              const std::vector<ProfileVector>& profiles);

struct KSweepEntry {
    int k = 0;
    bool ok = false;
    std::string error; // error code when !ok
    double inertia = 0.0;
    double distortion = 0.0;
    double silhouette = 0.0;
};

struct KSweepReport {
    std::vector<KSweepEntry> entries; // ascending k
    int suggestedK = -1;              // -1 when no k succeeded
    std::string suggestionRule = "max-silhouette";
    std::string metricName;
    std::uint64_t seed = 0;
};

KSweepReport sweepK(const std::vector<ProfileVector>& profiles, int kMin, int kMax,
                    const FitParams& baseParams);

std::string sweepReportJson(const KSweepReport& report);

void writeAssignmentsCsv(const ClusterModel& model, const std::string& path);
std::map<int, int> readAssignmentsCsv(const std::string& path);
void writeCentroidsCsv(const ClusterModel& model, const std::string& path);
Eigen::MatrixXd readCentroidsCsv(const std::string& path);
std::string clusterModelJson(const ClusterModel& model);

} // namespace meltline
