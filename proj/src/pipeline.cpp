#include "meltline/pipeline.hpp"

#include "meltline/counterfactual.hpp"
#include "meltline/csv.hpp"
#include "meltline/decision.hpp"
#include "meltline/error.hpp"
#include "meltline/kmeans.hpp"
#include "meltline/log.hpp"
#include "meltline/mcdm.hpp"
#include "meltline/profiles.hpp"
#include "meltline/segmentation.hpp"
#include "meltline/svg_plot.hpp"
#include "meltline/telemetry.hpp"

#include <nlohmann/json.hpp>

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstring>

namespace meltline {

namespace fs = std::filesystem;

OutDirLock::OutDirLock(const fs::path& outDir) : lockPath_(outDir / ".lock") {
    fd_ = ::open(lockPath_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
        if (errno == EEXIST)
            fail("OutDirLocked", "another invocation is writing to " + outDir.string() +
                                     " (stale? remove " + lockPath_.string() + ")");
        fail("OutDirLocked", "cannot create " + lockPath_.string() + ": " +
                                 std::strerror(errno));
    }
}

OutDirLock::~OutDirLock() {
    if (fd_ >= 0) {
        ::close(fd_);
        std::error_code ec;
        fs::remove(lockPath_, ec);
    }
}

const std::vector<std::string>& stageNames() {
    static const std::vector<std::string> names = {"ingest-report", "segment", "cluster",
                                                   "sweep-k",       "matrix",  "rank",
                                                   "savings",       "pipeline"};
    return names;
}

bool isStageName(const std::string& name) {
    const auto& names = stageNames();
    return std::find(names.begin(), names.end(), name) != names.end();
}

namespace {

fs::path requireArtifact(const fs::path& outDir, const char* name) {
    const fs::path path = outDir / name;
    if (!fs::exists(path))
        fail("MissingArtifact",
             std::string(name) + " not found in " + outDir.string() +
                 "; run the producing stage first");
    return path;
}

nlohmann::json readJsonArtifact(const fs::path& path, const std::string& expectedFormat) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(readTextFile(path.string()));
    } catch (const nlohmann::json::exception& e) {
        fail("BadManifest", path.string() + " is not valid JSON: " + e.what());
    }
    if (!j.contains("format") || !j["format"].is_string())
        fail("StaleArtifact", path.string() + " carries no format tag");
    if (j["format"].get<std::string>() != expectedFormat)
        fail("StaleArtifact", path.string() + " has format '" +
                                  j["format"].get<std::string>() + "', expected '" +
                                  expectedFormat + "'");
    return j;
}

TelemetryFrame loadConfiguredTelemetry(const PipelineConfig& config) {
    if (config.telemetryCsv.empty())
        fail("BadConfig", "telemetry.csv is required for this stage");
    if (config.schemaMap.empty()) return loadCanonicalTelemetry(config.telemetryCsv);
    TelemetrySchema schema;
    schema.columnMap = config.schemaMap;
    schema.validate();
    return loadTelemetry(config.telemetryCsv, schema);
}

std::vector<ProfileVector> loadProfiles(const PipelineConfig& config, const fs::path& outDir,
                                        std::vector<MeltSegment>* segmentsOut = nullptr) {
    const fs::path manifest = requireArtifact(outDir, artifacts::kSegments);
    auto segments = readSegments(manifest.string(), (outDir / artifacts::kTracesDir).string());
    if (segments.empty()) fail("EmptyFrame", "no segments to profile");
    ProfileParams params;
    params.length = config.profileLength;
    params.normalize = config.normalizeProfiles;
    auto profiles = buildProfiles(segments, params);
    if (segmentsOut) *segmentsOut = std::move(segments);
    return profiles;
}

FitParams baseFitParams(const PipelineConfig& config) {
    FitParams params;
    params.metric = config.metric;
    params.seed = config.seed;
    params.nInit = config.nInit;
    params.maxIter = config.maxIter;
    params.tol = config.tol;
    return params;
}

PriceSeries loadPrices(const PipelineConfig& config) {
    if (config.pricesCsv.empty())
        fail("BadConfig", "costs.prices_csv is required for this stage");
    return HourlySeries::fromCsv(config.pricesCsv);
}

EmissionSeries loadEmissions(const PipelineConfig& config) {
    if (config.emissionsCsv.empty())
        fail("BadConfig", "costs.emissions_csv is required for this stage");
    return HourlySeries::fromCsv(config.emissionsCsv, /*requireNonNegative=*/true);
}

void runIngestReport(const PipelineConfig& config, const fs::path& outDir) {
    const TelemetryFrame raw = loadConfiguredTelemetry(config);
    writeTextFile((outDir / artifacts::kCompleteness).string(),
                  completenessJson(completenessReport(raw)));
    const TelemetryFrame cleaned =
        cleanTelemetry(raw, {}, {fields::kMeltTemperature});
    if (cleaned.rowCount() == 0)
        fail("EmptyFrame", "no rows with temperature readings after cleaning");
    writeTelemetryCsv(cleaned, (outDir / artifacts::kCleanedTelemetry).string());
    logInfo("ingest: " + std::to_string(raw.rowCount()) + " rows in, " +
            std::to_string(cleaned.rowCount()) + " rows after cleaning");
}

void runSegment(const PipelineConfig& config, const fs::path& outDir) {
    const fs::path cleanedPath = requireArtifact(outDir, artifacts::kCleanedTelemetry);
    const TelemetryFrame cleaned = loadCanonicalTelemetry(cleanedPath.string());
    const auto endpoints = detectMeltEndpoints(cleaned, config.segmentation);
    const auto segments = extractMelts(cleaned, endpoints, config.segmentation);
    writeSegmentsManifest(segments, (outDir / artifacts::kSegments).string());
    writeSegmentTraces(segments, (outDir / artifacts::kTracesDir).string());
    logInfo("segment: " + std::to_string(segments.size()) + " melts from " +
            std::to_string(endpoints.size()) + " endpoints");
}

void runSweepK(const PipelineConfig& config, const fs::path& outDir) {
    const auto profiles = loadProfiles(config, outDir);
    int kMax = config.kMax;
    if (static_cast<size_t>(kMax) > profiles.size()) {
        kMax = static_cast<int>(profiles.size());
        logWarn("sweep-k: clamping k_max to the " + std::to_string(kMax) +
                " available profiles");
    }
    const KSweepReport report = sweepK(profiles, config.kMin, kMax, baseFitParams(config));
    writeTextFile((outDir / artifacts::kKSweep).string(), sweepReportJson(report));
    logInfo("sweep-k: suggested k = " + std::to_string(report.suggestedK));

    if (config.plots) {
        // Convenience view: each diagnostic scaled to [0, 1] on a shared axis.
        std::vector<PlotSeries> series;
        Eigen::VectorXd ks(static_cast<Eigen::Index>(report.entries.size()));
        Eigen::MatrixXd vals(3, ks.size());
        Eigen::Index idx = 0;
        for (const auto& entry : report.entries) {
            ks(idx) = entry.k;
            vals(0, idx) = entry.ok ? entry.inertia : NAN;
            vals(1, idx) = entry.ok ? entry.distortion : NAN;
            vals(2, idx) = entry.ok ? entry.silhouette : NAN;
            ++idx;
        }
        const std::array<const char*, 3> names = {"inertia (scaled)", "distortion (scaled)",
                                                  "silhouette (scaled)"};
        for (int r = 0; r < 3; ++r) {
            Eigen::VectorXd row = vals.row(r);
            const double lo = row.minCoeff(), hi = row.maxCoeff();
            if (hi > lo) row = (row.array() - lo) / (hi - lo);
            series.push_back({names[static_cast<size_t>(r)], ks, row});
        }
        writeLinePlot((outDir / "plot_ksweep.svg").string(),
                      "Cluster-count diagnostics", "k", "scaled score", series);
    }
}

void runCluster(const PipelineConfig& config, const fs::path& outDir) {
    std::vector<MeltSegment> segments;
    const auto profiles = loadProfiles(config, outDir, &segments);

    int k;
    if (config.k) {
        k = *config.k;
    } else {
        const auto sweep = readJsonArtifact(requireArtifact(outDir, artifacts::kKSweep),
                                            "meltline/ksweep/v1");
        k = sweep.value("suggested_k", -1);
        if (k < 1)
            fail("BadConfig",
                 "the k sweep produced no usable suggestion; set cluster.k explicitly");
        logInfo("cluster: using suggested k = " + std::to_string(k));
    }

    FitParams params = baseFitParams(config);
    params.k = k;
    const ClusterModel model = fitKMeans(profiles, params);
    writeAssignmentsCsv(model, (outDir / artifacts::kAssignments).string());
    writeCentroidsCsv(model, (outDir / artifacts::kCentroids).string());
    writeTextFile((outDir / artifacts::kClusterModel).string(), clusterModelJson(model));
    logInfo("cluster: k = " + std::to_string(k) + ", inertia = " + formatDouble(model.inertia) +
            (model.converged ? ", converged" : ", max iterations reached"));

    if (config.plots) {
        std::vector<int> sizes(static_cast<size_t>(model.k), 0);
        for (const int a : model.assignments) ++sizes[static_cast<size_t>(a)];
        std::vector<PlotSeries> series;
        Eigen::VectorXd x(model.centroids.cols());
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = static_cast<double>(i);
        for (int j = 0; j < model.k; ++j)
            series.push_back({"cluster " + std::to_string(j) + " (n=" +
                                  std::to_string(sizes[static_cast<size_t>(j)]) + ")",
                              x, model.centroids.row(j).transpose()});
        writeLinePlot((outDir / "plot_clusters.svg").string(), "Cluster mean melt profiles",
                      "profile point", "temperature [degC]", series);

        std::vector<std::string> labels;
        Eigen::VectorXd counts(model.k);
        for (int j = 0; j < model.k; ++j) {
            labels.push_back(std::to_string(j));
            counts(j) = sizes[static_cast<size_t>(j)];
        }
        writeBarChart((outDir / "plot_cluster_sizes.svg").string(), "Melts per cluster",
                      "cluster", "melts", labels, counts);
    }
}

void runMatrix(const PipelineConfig& config, const fs::path& outDir) {
    const auto segments = readSegments(requireArtifact(outDir, artifacts::kSegments).string(),
                                       (outDir / artifacts::kTracesDir).string());
    const auto assignments =
        readAssignmentsCsv(requireArtifact(outDir, artifacts::kAssignments).string());
    const EmissionSeries emissions = loadEmissions(config);
    const DecisionMatrix matrix =
        buildDecisionMatrix(segments, assignments, emissions, config.taxDkkPerKg,
                            config.weightsFor(kFoundryCriteria.size()));
    writeDecisionMatrixCsv(matrix, (outDir / artifacts::kDecisionMatrix).string());
    logInfo("matrix: " + std::to_string(matrix.alternatives.size()) + " clusters x " +
            std::to_string(matrix.criteria.size()) + " criteria");
}

void runRank(const PipelineConfig& config, const fs::path& outDir) {
    const std::string matrixPath =
        config.matrixCsv.empty() ? requireArtifact(outDir, artifacts::kDecisionMatrix).string()
                                 : config.matrixCsv;
    const DecisionMatrix matrix = readDecisionMatrixCsv(matrixPath);
    const RankingTable table =
        rankAll(matrix, config.weightsFor(matrix.criteria.size()), config.vikorV);
    writeRankingsCsv(table, (outDir / artifacts::kRankingsCsv).string());
    writeTextFile((outDir / artifacts::kRankingsJson).string(), rankingsJson(table));
    for (const auto& [method, code] : table.unavailable)
        logWarn("rank: " + method + " unavailable (" + code + ")");
    logInfo("rank: best cluster = " +
            std::to_string(table.unanimousBest ? *table.unanimousBest : table.consensusBest) +
            (table.unanimousBest ? " (unanimous)" : " (consensus)"));
}

void runSavings(const PipelineConfig& config, const fs::path& outDir) {
    const DecisionMatrix matrix =
        readDecisionMatrixCsv(requireArtifact(outDir, artifacts::kDecisionMatrix).string());
    const auto rankings = readJsonArtifact(requireArtifact(outDir, artifacts::kRankingsJson),
                                           "meltline/rankings/v1");
    int bestId = -1;
    if (rankings.contains("unanimous_best") && rankings["unanimous_best"].is_number_integer())
        bestId = rankings["unanimous_best"].get<int>();
    else if (rankings.contains("consensus_best") &&
             rankings["consensus_best"].is_number_integer())
        bestId = rankings["consensus_best"].get<int>();
    if (bestId < 0) fail("NoBestCluster", "rankings artifact names no best cluster");

    const auto segments = readSegments(requireArtifact(outDir, artifacts::kSegments).string(),
                                       (outDir / artifacts::kTracesDir).string());
    const auto assignments =
        readAssignmentsCsv(requireArtifact(outDir, artifacts::kAssignments).string());
    const auto best = BestPracticeProfile::fromMatrixRow(matrix, bestId);
    const CounterfactualReport report =
        projectBestPractice(segments, assignments, best, loadPrices(config),
                            loadEmissions(config), config.taxDkkPerKg);
    writeSavingsCsv(report, (outDir / artifacts::kSavings).string());
    writePerMeltCsv(report, (outDir / artifacts::kSavingsPerMelt).string());
    writeTextFile((outDir / artifacts::kSavingsJson).string(), savingsJson(report));
    const PercentChanges deltas = percentChanges(report);
    logInfo("savings: total cost change " + formatFixed(roundHalfUp(deltas.totalCost, 2), 2) +
            "% against best-practice cluster " + std::to_string(bestId));
}

void writeManifest(const PipelineConfig& config, const fs::path& outDir) {
    nlohmann::json j;
    j["format"] = "meltline/manifest/v1";
    const std::vector<std::pair<const char*, const char*>> known = {
        {artifacts::kCleanedTelemetry, "meltline/cleaned_telemetry/v1"},
        {artifacts::kCompleteness, "meltline/completeness/v1"},
        {artifacts::kSegments, "meltline/segments/v1"},
        {artifacts::kKSweep, "meltline/ksweep/v1"},
        {artifacts::kAssignments, "meltline/assignments/v1"},
        {artifacts::kCentroids, "meltline/centroids/v1"},
        {artifacts::kClusterModel, "meltline/cluster_model/v1"},
        {artifacts::kDecisionMatrix, "meltline/decision_matrix/v1"},
        {artifacts::kRankingsCsv, "meltline/rankings_csv/v1"},
        {artifacts::kRankingsJson, "meltline/rankings/v1"},
        {artifacts::kSavings, "meltline/savings_csv/v1"},
        {artifacts::kSavingsPerMelt, "meltline/savings_per_melt/v1"},
        {artifacts::kSavingsJson, "meltline/savings/v1"},
    };
    j["artifacts"] = nlohmann::json::array();
    for (const auto& [file, format] : known)
        if (fs::exists(outDir / file))
            j["artifacts"].push_back({{"file", file}, {"format", format}});
    j["parameters"] = {{"seed", config.seed},
                       {"metric", config.metric.name()},
                       {"profile_length", config.profileLength},
                       {"normalize", config.normalizeProfiles},
                       {"tax_dkk_per_kg", config.taxDkkPerKg},
                       {"vikor_v", config.vikorV}};
    writeTextFile((outDir / artifacts::kManifest).string(), j.dump(2) + "\n");
}

} // namespace

void runStage(const std::string& stage, const PipelineConfig& config) {
    if (!isStageName(stage)) fail("BadStage", "unknown subcommand '" + stage + "'");
    if (config.outDir.empty()) fail("BadConfig", "an output directory is required (--out)");
    const fs::path outDir(config.outDir);
    std::filesystem::create_directories(outDir);
    OutDirLock lock(outDir);

    if (stage == "ingest-report" || stage == "pipeline") runIngestReport(config, outDir);
    if (stage == "segment" || stage == "pipeline") runSegment(config, outDir);
    if (stage == "sweep-k" || stage == "pipeline") runSweepK(config, outDir);
    if (stage == "cluster" || stage == "pipeline") runCluster(config, outDir);
    if (stage == "matrix" || stage == "pipeline") runMatrix(config, outDir);
    if (stage == "rank" || stage == "pipeline") runRank(config, outDir);
    if (stage == "savings" || stage == "pipeline") runSavings(config, outDir);
    if (stage == "pipeline") writeManifest(config, outDir);
}

} // namespace meltline
