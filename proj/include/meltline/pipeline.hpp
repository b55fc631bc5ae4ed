#pragma once

#include "meltline/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace meltline {

namespace artifacts {
inline constexpr const char* kCleanedTelemetry = "cleaned_telemetry.csv";
inline constexpr const char* kCompleteness = "completeness.json";
inline constexpr const char* kSegments = "segments.csv";
inline constexpr const char* kTracesDir = "traces";
inline constexpr const char* kKSweep = "ksweep.json";
inline constexpr const char* kAssignments = "assignments.csv";
inline constexpr const char* kCentroids = "centroids.csv";
inline constexpr const char* kClusterModel = "cluster_model.json";
inline constexpr const char* kDecisionMatrix = "decision_matrix.csv";
inline constexpr const char* kRankingsCsv = "rankings.csv";
inline constexpr const char* kRankingsJson = "rankings.json";
inline constexpr const char* kSavings = "savings.csv";
inline constexpr const char* kSavingsPerMelt = "savings_per_melt.csv";
inline constexpr const char* kSavingsJson = "savings.json";
inline constexpr const char* kManifest = "manifest.json";
} // namespace artifacts

// Exclusive guard against concurrent runs into one output directory.
class OutDirLock {
  public:
    explicit OutDirLock(const std::filesystem::path& outDir);
    ~OutDirLock();
    OutDirLock(const OutDirLock&) = delete;
    OutDirLock& operator=(const OutDirLock&) = delete;

  private:
    std::filesystem::path lockPath_;
    int fd_ = -1;
};

const std::vector<std::string>& stageNames();
bool isStageName(const std::string& name);

// Runs one subcommand ("pipeline" runs every stage in order) against
// config.outDir; stages read earlier stages' artifacts from there.
void runStage(const std::string& stage, const PipelineConfig& config);

} // namespace meltline
