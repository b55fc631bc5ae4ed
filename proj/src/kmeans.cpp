#include "meltline/kmeans.hpp"

#include "meltline/csv.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace meltline {

void FitParams::validate() const {
    if (k < 1) fail("BadParams", "k must be >= 1");
    if (nInit < 1) fail("BadParams", "nInit must be >= 1");
    if (maxIter < 1) fail("BadParams", "maxIter must be >= 1");
    if (!(tol > 0.0)) fail("BadParams", "tol must be > 0");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Engine draws are portable; the distribution adapters below are hand-rolled
// so results do not depend on the standard library's distribution internals.
std::mt19937_64 makeEngine(std::uint64_t seed, std::uint32_t runIndex) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32), runIndex};
    return std::mt19937_64(seq);
}

Eigen::Index drawIndex(std::mt19937_64& rng, Eigen::Index n) {
    return static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n));
}

double drawUnit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

double metricDistance(const Eigen::MatrixXd& x, Eigen::Index row, const Eigen::VectorXd& c,
                      const Metric& metric) {
    if (metric.kind == Metric::Kind::Euclidean)
        return euclideanDistance(x.row(row).transpose(), c);
    return dtwDistance(x.row(row).transpose(), c, metric.bandWidth);
}

Eigen::MatrixXd seedCentroids(const Eigen::MatrixXd& x, int k, const Metric& metric,
                              std::mt19937_64& rng) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd centroids(k, x.cols());
    centroids.row(0) = x.row(drawIndex(rng, n));

    Eigen::VectorXd d2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = metricDistance(x, i, centroids.row(0).transpose(), metric);
        d2(i) = d * d;
    }
    for (int j = 1; j < k; ++j) {
        const double total = d2.sum();
        Eigen::Index pick;
        if (total <= 0.0) {
            pick = drawIndex(rng, n);
        } else {
            const double r = drawUnit(rng) * total;
            double cum = 0.0;
            pick = -1;
            for (Eigen::Index i = 0; i < n; ++i) {
                cum += d2(i);
                if (r < cum) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) { // rounding pushed r past the last bucket
                for (Eigen::Index i = n - 1; i >= 0; --i)
                    if (d2(i) > 0.0) {
                        pick = i;
                        break;
                    }
                if (pick < 0) pick = n - 1;
            }
        }
        centroids.row(j) = x.row(pick);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = metricDistance(x, i, centroids.row(j).transpose(), metric);
            d2(i) = std::min(d2(i), d * d);
        }
    }
    return centroids;
}

// One DBA-style centroid refinement: align the current centroid to each member
// and average the member values mapped onto every centroid slot.
Eigen::VectorXd dbaCentroid(const Eigen::MatrixXd& x, const std::vector<Eigen::Index>& members,
                            Eigen::VectorXd centroid, std::optional<int> bandWidth) {
    constexpr int kDbaIterations = 10;
    const Eigen::Index length = centroid.size();
    for (int it = 0; it < kDbaIterations; ++it) {
        Eigen::VectorXd sums = Eigen::VectorXd::Zero(length);
        Eigen::VectorXd counts = Eigen::VectorXd::Zero(length);
        for (const Eigen::Index m : members) {
            const Eigen::VectorXd row = x.row(m).transpose();
            for (const auto& [ci, mi] : dtwAlignmentPath(centroid, row, bandWidth)) {
                sums(ci) += row(mi);
                counts(ci) += 1.0;
            }
        }
        Eigen::VectorXd next = sums.array() / counts.array();
        if (next == centroid) break;
        centroid = std::move(next);
    }
    return centroid;
}

struct RunResult {
    Eigen::MatrixXd centroids;
    std::vector<int> assignments;
    double inertia = kInf;
    std::vector<double> trace;
    int iterations = 0;
    bool converged = false;
};

// Assign every point to its nearest centroid (ties to the lowest cluster
// index) and return the summed squared distances.
double assignPoints(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids,
                    const Metric& metric, std::vector<int>& assignments,
                    Eigen::VectorXd& pointDist) {
    const Eigen::Index n = x.rows();
    const int k = static_cast<int>(centroids.rows());
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double best = kInf;
        int bestJ = 0;
        for (int j = 0; j < k; ++j) {
            const double d = metricDistance(x, i, centroids.row(j).transpose(), metric);
            if (d < best) {
                best = d;
                bestJ = j;
            }
        }
        assignments[static_cast<size_t>(i)] = bestJ;
        pointDist(i) = best;
        inertia += best * best;
    }
    return inertia;
}

// Move the farthest point of a donor cluster (>= 2 members) into each empty
// cluster, making that point the cluster's centroid. Returns the repaired
// inertia, which never exceeds the incoming one.
double repairEmptyClusters(const Eigen::MatrixXd& x, Eigen::MatrixXd& centroids,
                           std::vector<int>& assignments, Eigen::VectorXd& pointDist,
                           double inertia) {
    const int k = static_cast<int>(centroids.rows());
    std::vector<int> sizes(static_cast<size_t>(k), 0);
    for (const int a : assignments) ++sizes[static_cast<size_t>(a)];

    for (int j = 0; j < k; ++j) {
        if (sizes[static_cast<size_t>(j)] > 0) continue;
        Eigen::Index farthest = -1;
        double worst = -1.0;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            if (sizes[static_cast<size_t>(assignments[static_cast<size_t>(i)])] < 2) continue;
            if (pointDist(i) > worst) {
                worst = pointDist(i);
                farthest = i;
            }
        }
        if (farthest < 0) fail("AllIdentical", "cannot populate empty cluster");
        --sizes[static_cast<size_t>(assignments[static_cast<size_t>(farthest)])];
        assignments[static_cast<size_t>(farthest)] = j;
        ++sizes[static_cast<size_t>(j)];
        centroids.row(j) = x.row(farthest);
        inertia -= pointDist(farthest) * pointDist(farthest);
        pointDist(farthest) = 0.0;
    }
    return inertia;
}

RunResult runLloyd(const Eigen::MatrixXd& x, const FitParams& params, std::uint32_t runIndex) {
    auto rng = makeEngine(params.seed, runIndex);
    RunResult run;
    run.centroids = seedCentroids(x, params.k, params.metric, rng);
    run.assignments.assign(static_cast<size_t>(x.rows()), 0);
    Eigen::VectorXd pointDist(x.rows());

    for (int iter = 0; iter < params.maxIter; ++iter) {
        double inertia = assignPoints(x, run.centroids, params.metric, run.assignments, pointDist);
        run.trace.push_back(inertia);
        repairEmptyClusters(x, run.centroids, run.assignments, pointDist, inertia);

        Eigen::MatrixXd updated = run.centroids;
        std::vector<std::vector<Eigen::Index>> members(static_cast<size_t>(params.k));
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            members[static_cast<size_t>(run.assignments[static_cast<size_t>(i)])].push_back(i);
        for (int j = 0; j < params.k; ++j) {
            const auto& memberRows = members[static_cast<size_t>(j)];
            if (memberRows.empty()) continue; // unreachable after repair
            if (params.metric.kind == Metric::Kind::Euclidean) {
                Eigen::VectorXd mean = Eigen::VectorXd::Zero(x.cols());
                for (const Eigen::Index m : memberRows) mean += x.row(m).transpose();
                updated.row(j) = mean / static_cast<double>(memberRows.size());
            } else {
                updated.row(j) = dbaCentroid(x, memberRows, run.centroids.row(j).transpose(),
                                             params.metric.bandWidth);
            }
        }

        double displacement = 0.0;
        for (int j = 0; j < params.k; ++j)
            displacement = std::max(
                displacement, profileDistance(run.centroids.row(j).transpose(),
                                              updated.row(j).transpose(), params.metric));
        run.centroids = std::move(updated);
        run.iterations = iter + 1;
        if (displacement < params.tol) {
            run.converged = true;
            break;
        }
    }

    double inertia = assignPoints(x, run.centroids, params.metric, run.assignments, pointDist);
    inertia = repairEmptyClusters(x, run.centroids, run.assignments, pointDist, inertia);
    run.trace.push_back(inertia);
    run.inertia = inertia;
    return run;
}

} // namespace

ClusterModel fitKMeans(const std::vector<ProfileVector>& profiles, const FitParams& params) {
    params.validate();
    if (static_cast<size_t>(params.k) > profiles.size())
        fail("TooFewProfiles", "k = " + std::to_string(params.k) + " but only " +
                                   std::to_string(profiles.size()) + " profiles");
    const Eigen::MatrixXd x = profileMatrix(profiles);
    if (!x.allFinite()) fail("BadProfile", "profiles must be finite");

    bool allIdentical = true;
    for (Eigen::Index i = 1; i < x.rows() && allIdentical; ++i)
        allIdentical = (x.row(i) == x.row(0));
    if (allIdentical && params.k > 1)
        fail("AllIdentical", "all profiles are identical; cannot form " +
                                 std::to_string(params.k) + " non-empty clusters");

    RunResult best;
    for (int run = 0; run < params.nInit; ++run) {
        RunResult candidate = runLloyd(x, params, static_cast<std::uint32_t>(run));
        if (candidate.inertia < best.inertia) best = std::move(candidate);
    }

    ClusterModel model;
    model.k = params.k;
    model.metric = params.metric;
    model.centroids = std::move(best.centroids);
    model.assignments = std::move(best.assignments);
    model.seed = params.seed;
    model.iterationsRun = best.iterations;
    model.converged = best.converged;
    model.inertia = best.inertia;
    model.inertiaTrace = std::move(best.trace);
    for (size_t i = 0; i < profiles.size(); ++i)
        model.assignmentByMeltId[profiles[i].meltId] = model.assignments[i];
    return model;
}

Eigen::MatrixXd pairwiseDistances(const Eigen::MatrixXd& profiles, const Metric& metric) {
    const Eigen::Index n = profiles.rows();
    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = profileDistance(profiles.row(i).transpose(),
                                             profiles.row(j).transpose(), metric);
            dist(i, j) = d;
            dist(j, i) = d;
        }
    return dist;
}

double silhouetteFromDistances(const Eigen::MatrixXd& distances,
                               const std::vector<int>& assignments, int k) {
    const Eigen::Index n = distances.rows();
    if (n == 0 || static_cast<size_t>(n) != assignments.size())
        fail("LengthMismatch", "distance matrix and assignments disagree");
    std::vector<int> sizes(static_cast<size_t>(k), 0);
    for (const int a : assignments) {
        if (a < 0 || a >= k) fail("BadParams", "assignment out of range");
        ++sizes[static_cast<size_t>(a)];
    }
    int nonEmpty = 0;
    for (const int s : sizes)
        if (s > 0) ++nonEmpty;
    if (nonEmpty < 2)
        fail("SingleCluster", "silhouette needs at least two non-empty clusters");

    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int own = assignments[static_cast<size_t>(i)];
        if (sizes[static_cast<size_t>(own)] == 1) continue; // singleton scores 0
        Eigen::VectorXd sums = Eigen::VectorXd::Zero(k);
        for (Eigen::Index j = 0; j < n; ++j)
            sums(assignments[static_cast<size_t>(j)]) += distances(i, j);
        const double a = sums(own) / (sizes[static_cast<size_t>(own)] - 1);
        double b = kInf;
        for (int c = 0; c < k; ++c) {
            if (c == own || sizes[static_cast<size_t>(c)] == 0) continue;
            b = std::min(b, sums(c) / sizes[static_cast<size_t>(c)]);
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

double silhouetteScore(const std::vector<ProfileVector>& profiles,
                       const std::vector<int>& assignments, int k, const Metric& metric) {
    if (k < 2) fail("SingleCluster", "silhouette is undefined for k = 1");
    return silhouetteFromDistances(pairwiseDistances(profileMatrix(profiles), metric),
                                   assignments, k);
}

QualityMetrics qualityMetrics(const ClusterModel& model,
                              const std::vector<ProfileVector>& profiles) {
    if (profiles.size() != model.assignments.size())
        fail("LengthMismatch", "model was fitted on a different number of profiles");
    const Eigen::MatrixXd x = profileMatrix(profiles);
    QualityMetrics q;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double d = profileDistance(
            x.row(i).transpose(),
            model.centroids.row(model.assignments[static_cast<size_t>(i)]).transpose(),
            model.metric);
        q.inertia += d * d;
    }
    q.distortion = q.inertia / static_cast<double>(profiles.size());
    if (model.k >= 2)
        q.silhouette = silhouetteScore(profiles, model.assignments, model.k, model.metric);
    return q;
}

KSweepReport sweepK(const std::vector<ProfileVector>& profiles, int kMin, int kMax,
                    const FitParams& baseParams) {
    if (kMin < 2 || kMax < kMin || static_cast<size_t>(kMax) > profiles.size())
        fail("BadKRange", "k range must satisfy 2 <= kMin <= kMax <= profile count");

    KSweepReport report;
    report.metricName = baseParams.metric.name();
    report.seed = baseParams.seed;

    const Eigen::MatrixXd dist = pairwiseDistances(profileMatrix(profiles), baseParams.metric);
    double bestSilhouette = -kInf;
    for (int k = kMin; k <= kMax; ++k) {
        KSweepEntry entry;
        entry.k = k;
        try {
            FitParams params = baseParams;
            params.k = k;
            params.seed = baseParams.seed + 1000003ULL * static_cast<std::uint64_t>(k);
            const ClusterModel model = fitKMeans(profiles, params);
            double inertia = 0.0;
            const Eigen::MatrixXd x = profileMatrix(profiles);
            for (Eigen::Index i = 0; i < x.rows(); ++i) {
                const double d = profileDistance(
                    x.row(i).transpose(),
                    model.centroids.row(model.assignments[static_cast<size_t>(i)]).transpose(),
                    model.metric);
                inertia += d * d;
            }
            entry.inertia = inertia;
            entry.distortion = inertia / static_cast<double>(profiles.size());
            entry.silhouette = silhouetteFromDistances(dist, model.assignments, k);
            entry.ok = true;
            if (entry.silhouette > bestSilhouette) {
                bestSilhouette = entry.silhouette;
                report.suggestedK = k;
            }
        } catch (const Error& e) {
            entry.ok = false;
            entry.error = e.code();
        }
        report.entries.push_back(entry);
    }
    return report;
}

std::string sweepReportJson(const KSweepReport& report) {
    nlohmann::json j;
    j["format"] = "meltline/ksweep/v1";
    j["metric"] = report.metricName;
    j["seed"] = report.seed;
    j["suggested_k"] = report.suggestedK;
    j["suggestion_rule"] = report.suggestionRule;
    j["per_k"] = nlohmann::json::array();
    for (const auto& entry : report.entries) {
        nlohmann::json e;
        e["k"] = entry.k;
        e["ok"] = entry.ok;
        if (entry.ok) {
            e["inertia"] = entry.inertia;
            e["distortion"] = entry.distortion;
            e["silhouette"] = entry.silhouette;
        } else {
            e["error"] = entry.error;
        }
        j["per_k"].push_back(e);
    }
    return j.dump(2) + "\n";
}

void writeAssignmentsCsv(const ClusterModel& model, const std::string& path) {
    CsvTable table;
    table.header = {"melt_id", "cluster"};
    for (const auto& [meltId, cluster] : model.assignmentByMeltId)
        table.rows.push_back({std::to_string(meltId), std::to_string(cluster)});
    writeCsv(path, table);
}

std::map<int, int> readAssignmentsCsv(const std::string& path) {
    const CsvTable table = readCsv(path);
    const int meltCol = table.columnIndex("melt_id");
    const int clusterCol = table.columnIndex("cluster");
    if (meltCol < 0 || clusterCol < 0)
        fail("BadManifest", "assignments file is missing columns: " + path);
    std::map<int, int> assignments;
    for (const auto& row : table.rows) {
        double meltId, cluster;
        if (!parseDoubleStrict(row[meltCol], meltId) ||
            !parseDoubleStrict(row[clusterCol], cluster))
            fail("BadManifest", "bad assignment row in " + path);
        assignments[static_cast<int>(meltId)] = static_cast<int>(cluster);
    }
    return assignments;
}

void writeCentroidsCsv(const ClusterModel& model, const std::string& path) {
    CsvTable table;
    table.header = {"cluster"};
    for (Eigen::Index i = 0; i < model.centroids.cols(); ++i)
        table.header.push_back("v" + std::to_string(i));
    for (Eigen::Index j = 0; j < model.centroids.rows(); ++j) {
        std::vector<std::string> row{std::to_string(j)};
        for (Eigen::Index i = 0; i < model.centroids.cols(); ++i)
            row.push_back(formatDouble(model.centroids(j, i)));
        table.rows.push_back(std::move(row));
    }
    writeCsv(path, table);
}

Eigen::MatrixXd readCentroidsCsv(const std::string& path) {
    const CsvTable table = readCsv(path);
    if (table.header.size() < 2 || table.header[0] != "cluster")
        fail("BadManifest", "centroids file is malformed: " + path);
    const Eigen::Index length = static_cast<Eigen::Index>(table.header.size()) - 1;
    Eigen::MatrixXd centroids(static_cast<Eigen::Index>(table.rows.size()), length);
    for (size_t r = 0; r < table.rows.size(); ++r)
        for (Eigen::Index c = 0; c < length; ++c) {
            double v;
            if (!parseDoubleStrict(table.rows[r][static_cast<size_t>(c) + 1], v))
                fail("BadManifest", "bad centroid value in " + path);
            centroids(static_cast<Eigen::Index>(r), c) = v;
        }
    return centroids;
}

std::string clusterModelJson(const ClusterModel& model) {
    nlohmann::json j;
    j["format"] = "meltline/cluster_model/v1";
    j["k"] = model.k;
    j["metric"] = model.metric.name();
    j["seed"] = model.seed;
    j["iterations_run"] = model.iterationsRun;
    j["converged"] = model.converged;
    j["inertia"] = model.inertia;
    std::vector<int> sizes(static_cast<size_t>(model.k), 0);
    for (const int a : model.assignments) ++sizes[static_cast<size_t>(a)];
    j["cluster_sizes"] = sizes;
    return j.dump(2) + "\n";
}

} // namespace meltline
