// Acceptance gate for the melt-pattern toolkit. Each criterion prints one
// PASS/FAIL line with its runtime; the process exits with the number of
// failures. Reference values and tolerances are frozen here on purpose so a
// regression cannot hide behind a regenerated fixture.

#include "meltline/counterfactual.hpp"
#include "meltline/csv.hpp"
#include "meltline/decision.hpp"
#include "meltline/distances.hpp"
#include "meltline/error.hpp"
#include "meltline/kmeans.hpp"
#include "meltline/mcdm.hpp"
#include "meltline/pipeline.hpp"
#include "meltline/segmentation.hpp"
#include "meltline/synthetic.hpp"
#include "meltline/telemetry.hpp"

#include "support/test_support.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace meltline;
using testsupport::TempDir;
using testsupport::UnitRng;

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Frozen reference data: the 12-cluster foundry performance matrix and the
// expected scores of all five ranking methods on it.

constexpr double kReferenceMatrix[12][4] = {
    {5346.25, 5186.9, 554.83, 509.44}, {5251.67, 5111.82, 552.55, 552.57},
    {20515.0, 5364.75, 573.8, 643.6},  {4332.73, 4858.24, 522.0, 338.01},
    {5221.0, 4980.3, 551.26, 496.16},  {12870.0, 6368.12, 664.31, 803.86},
    {4892.0, 4880.48, 541.03, 396.21}, {6216.0, 5236.36, 554.28, 493.01},
    {5886.0, 5028.03, 550.13, 368.42}, {7370.0, 5027.46, 563.93, 404.34},
    {11820.0, 5260.52, 605.99, 410.19}, {5218.57, 5065.82, 545.92, 421.69},
};

// Columns: SAW, MEW, TOPSIS, mTOPSIS, VIKOR.
constexpr double kReferenceRatings[12][5] = {
    {0.25783, 0.25160, 0.82853, 0.82853, 0.30858},
    {0.26195, 0.25443, 0.79901, 0.79901, 0.35786},
    {0.40147, 0.37967, 0.17793, 0.17793, 0.83386},
    {0.21649, 0.20874, 1.00000, 1.00000, 0.00000},
    {0.25162, 0.24555, 0.84409, 0.84409, 0.26624},
    {0.38969, 0.38676, 0.37868, 0.37868, 1.00000},
    {0.23199, 0.22617, 0.93427, 0.93427, 0.11052},
    {0.26293, 0.25968, 0.81689, 0.81689, 0.29767},
    {0.23903, 0.23532, 0.90686, 0.90686, 0.16566},
    {0.25763, 0.25636, 0.82027, 0.82027, 0.25173},
    {0.30212, 0.29815, 0.59682, 0.59682, 0.50407},
    {0.24141, 0.23617, 0.90259, 0.90259, 0.16635},
};

// Reference campaign totals (electricity DKK, carbon DKK, CO2 kg) and the
// percent changes the counterfactual must reproduce from them.
constexpr double kCurrentTotals[3] = {602913.00, 40761.88, 54349.18};
constexpr double kBestTotals[3] = {551041.56, 37321.17, 49761.56};
constexpr double kExpectedPercent[4] = {8.60, 8.44, 8.44, 8.59};
constexpr double kCarbonTax = 0.75;

constexpr double kTableTolerance = 1e-3;
constexpr double kSpotTolerance = 1e-4;
constexpr double kExactTolerance = 1e-12;

const std::vector<double> kEqualWeights = {0.25, 0.25, 0.25, 0.25};

DecisionMatrix referenceMatrix() {
    DecisionMatrix matrix;
    for (int i = 0; i < 12; ++i) matrix.alternatives.push_back(i);
    for (const char* name : kFoundryCriteria)
        matrix.criteria.push_back({name, Direction::Cost, 0.25});
    matrix.values.resize(12, 4);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 4; ++j) matrix.values(i, j) = kReferenceMatrix[i][j];
    return matrix;
}

struct Checker {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& message) {
        if (!ok) failures.push_back(message);
    }
};

std::string fmt(double v) { return formatDouble(v); }

int runCommand(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> artifactFiles(const fs::path& root) {
    std::vector<std::string> rel;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file())
            rel.push_back(fs::relative(entry.path(), root).string());
    std::sort(rel.begin(), rel.end());
    return rel;
}

// ---------------------------------------------------------------------------
// Criterion 1: the reference matrix under equal weights and v = 0.5
// reproduces every published method score within 1e-3 (spot values within
// 1e-4) in under a second.

void criterionReferenceRatings(Checker& c) {
    const auto start = std::chrono::steady_clock::now();
    const RankingTable table = rankAll(referenceMatrix(), kEqualWeights, 0.5);
    c.expect(table.methods.size() == 5, "expected all five methods to run");
    if (table.methods.size() != 5) return;

    for (int k = 0; k < 5; ++k) {
        const MethodScores& method = table.methods[static_cast<std::size_t>(k)];
        for (int i = 0; i < 12; ++i) {
            const double got = method.scores(i);
            const double want = kReferenceRatings[i][k];
            if (std::abs(got - want) > kTableTolerance)
                c.failures.push_back(method.method + " cluster " + std::to_string(i) +
                                     ": got " + fmt(got) + ", expected " + fmt(want));
        }
    }
    const double saw3 = table.methods[0].scores(3);
    const double mew3 = table.methods[1].scores(3);
    const double vikor2 = table.methods[4].scores(2);
    c.expect(std::abs(saw3 - 0.21649) <= kSpotTolerance,
             "SAW cluster-3 spot value off: " + fmt(saw3));
    c.expect(std::abs(mew3 - 0.20874) <= kSpotTolerance,
             "MEW cluster-3 spot value off: " + fmt(mew3));
    c.expect(std::abs(vikor2 - 0.83386) <= kSpotTolerance,
             "VIKOR cluster-2 spot value off: " + fmt(vikor2));

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(seconds < 1.0, "scoring took " + fmt(seconds) + " s, budget is 1 s");

    // The bundled fixtures must agree with the frozen copies above.
    const DecisionMatrix bundled =
        readDecisionMatrixCsv(testsupport::fixturePath("foundry_matrix.csv"));
    c.expect(bundled.alternatives.size() == 12, "bundled matrix does not have 12 rows");
    for (int i = 0; i < 12 && bundled.alternatives.size() == 12; ++i)
        for (int j = 0; j < 4; ++j)
            c.expect(std::abs(bundled.values(i, j) - kReferenceMatrix[i][j]) <
                         kExactTolerance,
                     "bundled matrix drifted at row " + std::to_string(i));
    const CsvTable ratings =
        readCsv(testsupport::fixturePath("foundry_ratings_expected.csv"));
    c.expect(ratings.rows.size() == 12, "bundled ratings do not have 12 rows");
    for (std::size_t i = 0; i < ratings.rows.size(); ++i)
        for (int k = 0; k < 5; ++k)
            c.expect(std::abs(testsupport::toDouble(ratings.rows[i][static_cast<std::size_t>(
                                  k + 1)]) -
                              kReferenceRatings[i][k]) < kExactTolerance,
                     "bundled ratings drifted at row " + std::to_string(i));
}

// ---------------------------------------------------------------------------
// Criterion 2: every method puts cluster 3 first, so the best-practice pick
// is unanimous.

void criterionUnanimousBest(Checker& c) {
    const RankingTable table = rankAll(referenceMatrix(), kEqualWeights, 0.5);
    c.expect(table.unanimousBest.has_value(), "no unanimous winner");
    if (table.unanimousBest)
        c.expect(*table.unanimousBest == 3,
                 "unanimous winner is cluster " + std::to_string(*table.unanimousBest) +
                     ", expected 3");
    for (const auto& method : table.methods)
        c.expect(method.ranking.front() == 3, method.method + " does not rank cluster 3 first");
}

// ---------------------------------------------------------------------------
// Criterion 3: on random cost matrices TOPSIS and mTOPSIS coincide entrywise
// within 1e-12 under uniform weights and differ on at least 95% of draws
// under clearly non-uniform weights.

void criterionTopsisAgreement(Checker& c) {
    UnitRng rng(20250311);
    const int trials = 200;
    int uniformViolations = 0;
    int differing = 0;
    for (int trial = 0; trial < trials; ++trial) {
        const int m = rng.intIn(2, 8);
        const int n = rng.intIn(2, 6);
        DecisionMatrix matrix;
        for (int i = 0; i < m; ++i) matrix.alternatives.push_back(i);
        for (int j = 0; j < n; ++j)
            matrix.criteria.push_back({"c" + std::to_string(j), Direction::Cost, 0.0});
        matrix.values.resize(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) matrix.values(i, j) = rng.range(0.1, 10.0);

        const std::vector<double> uniform(static_cast<std::size_t>(n),
                                          1.0 / static_cast<double>(n));
        const MethodScores a = scoreTopsis(matrix, uniform);
        const MethodScores b = scoreMtopsis(matrix, uniform);
        if ((a.scores - b.scores).cwiseAbs().maxCoeff() > kExactTolerance)
            ++uniformViolations;

        // Skewed weights: exponential spread, renormalized, never near-uniform.
        std::vector<double> skewed(static_cast<std::size_t>(n));
        double sum = 0.0;
        double lo = 1e9, hi = 0.0;
        for (double& w : skewed) {
            w = std::exp(rng.range(-1.2, 1.2));
            sum += w;
        }
        for (double& w : skewed) {
            w /= sum;
            lo = std::min(lo, w);
            hi = std::max(hi, w);
        }
        if (hi / lo < 1.5) {
            skewed[0] *= 3.0;
            double renorm = 0.0;
            for (const double w : skewed) renorm += w;
            for (double& w : skewed) w /= renorm;
        }
        const MethodScores sa = scoreTopsis(matrix, skewed);
        const MethodScores sb = scoreMtopsis(matrix, skewed);
        if ((sa.scores - sb.scores).cwiseAbs().maxCoeff() > 1e-9) ++differing;
    }
    c.expect(uniformViolations == 0,
             std::to_string(uniformViolations) + "/200 uniform-weight draws disagreed");
    c.expect(differing >= 190, "only " + std::to_string(differing) +
                                   "/200 skewed-weight draws differed (need 190)");
}

// ---------------------------------------------------------------------------
// Criterion 4: multiplying any criterion column by a positive constant leaves
// every method's ranking unchanged.

void criterionScaleInvariance(Checker& c) {
    UnitRng rng(5150);
    const int trials = 200;
    for (int trial = 0; trial < trials; ++trial) {
        const int m = rng.intIn(3, 7);
        const int n = rng.intIn(2, 5);
        DecisionMatrix matrix;
        for (int i = 0; i < m; ++i) matrix.alternatives.push_back(i);
        for (int j = 0; j < n; ++j)
            matrix.criteria.push_back({"c" + std::to_string(j), Direction::Cost, 0.0});
        matrix.values.resize(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) matrix.values(i, j) = rng.range(0.1, 10.0);
        const std::vector<double> weights(static_cast<std::size_t>(n),
                                          1.0 / static_cast<double>(n));

        const RankingTable before = rankAll(matrix, weights, 0.5);
        DecisionMatrix scaled = matrix;
        for (int j = 0; j < n; ++j) scaled.values.col(j) *= rng.range(0.1, 10.0);
        const RankingTable after = rankAll(scaled, weights, 0.5);

        if (before.methods.size() != after.methods.size()) {
            c.failures.push_back("trial " + std::to_string(trial) +
                                 ": method availability changed under rescaling");
            continue;
        }
        for (std::size_t k = 0; k < before.methods.size(); ++k)
            if (before.methods[k].ranking != after.methods[k].ranking) {
                c.failures.push_back("trial " + std::to_string(trial) + ": " +
                                     before.methods[k].method +
                                     " ranking changed under rescaling");
                break;
            }
    }
}

// ---------------------------------------------------------------------------
// Criterion 5: the reference campaign totals with a 0.75 DKK/kg tax yield the
// published percent changes, the carbon cost is exactly CO2 x tax, and with
// flat price/intensity series the whole counterfactual collapses to the same
// single percentage (end-to-end identity).

void criterionSavings(Checker& c) {
    CounterfactualReport report;
    report.bestClusterId = 3;
    report.taxDkkPerKg = kCarbonTax;
    report.current = {kCurrentTotals[0], kCurrentTotals[1], kCurrentTotals[2]};
    report.best = {kBestTotals[0], kBestTotals[1], kBestTotals[2]};

    c.expect(std::abs(report.current.carbonCostDkk -
                      report.current.co2Kg * kCarbonTax) < 0.01,
             "current carbon cost is not CO2 x tax within 0.01 DKK");
    c.expect(std::abs(report.best.carbonCostDkk - report.best.co2Kg * kCarbonTax) < 0.01,
             "best carbon cost is not CO2 x tax within 0.01 DKK");

    const PercentChanges deltas = percentChanges(report);
    const double rounded[4] = {roundHalfUp(deltas.electricityCost, 2),
                               roundHalfUp(deltas.carbonCost, 2), roundHalfUp(deltas.co2, 2),
                               roundHalfUp(deltas.totalCost, 2)};
    const char* names[4] = {"electricity", "carbon", "co2", "total"};
    for (int i = 0; i < 4; ++i)
        c.expect(std::abs(rounded[i] - kExpectedPercent[i]) < 1e-9,
                 std::string(names[i]) + " percent change: got " + fmt(rounded[i]) +
                     ", expected " + fmt(kExpectedPercent[i]));

    // Frozen copies must agree with the bundled totals fixture.
    const CsvTable totals = readCsv(testsupport::fixturePath("foundry_totals.csv"));
    c.expect(totals.rows.size() == 2, "bundled totals fixture malformed");
    if (totals.rows.size() == 2)
        for (int col = 0; col < 3; ++col) {
            c.expect(std::abs(testsupport::toDouble(totals.rows[0][static_cast<std::size_t>(
                                  col + 1)]) -
                              kCurrentTotals[col]) < kExactTolerance,
                     "bundled current totals drifted");
            c.expect(std::abs(testsupport::toDouble(totals.rows[1][static_cast<std::size_t>(
                                  col + 1)]) -
                              kBestTotals[col]) < kExactTolerance,
                     "bundled best totals drifted");
        }

    // End-to-end identity on flat series.
    const auto prices = PriceSeries::flat(0.5, -7200.0, 24);
    const auto emissions = EmissionSeries::flat(0.12, -7200.0, 24);
    std::vector<MeltSegment> melts;
    const double durations[3] = {5400.0, 3700.0, 4100.0};
    const double energies[3] = {6100.0, 4600.0, 5200.0};
    for (int i = 0; i < 3; ++i) {
        MeltSegment seg;
        seg.id = i;
        seg.startTime = 7000.0 * i;
        seg.endTime = seg.startTime + durations[i];
        seg.durationS = durations[i];
        seg.energyKwh = energies[i];
        seg.weightTonne = 9.0;
        melts.push_back(seg);
    }
    const std::map<int, int> assignments = {{0, 0}, {1, 1}, {2, 0}};
    BestPracticeProfile best;
    best.clusterId = 1;
    best.avgDurationS = 3700.0;
    best.avgEnergyKwh = 4600.0;
    best.avgKwhPerTonne = 4600.0 / 9.0;
    const CounterfactualReport flat =
        projectBestPractice(melts, assignments, best, prices, emissions, kCarbonTax);
    const PercentChanges fd = percentChanges(flat);
    c.expect(std::abs(fd.electricityCost - fd.co2) < 1e-9,
             "flat series: electricity and CO2 percent changes differ");
    c.expect(std::abs(fd.electricityCost - fd.carbonCost) < 1e-9,
             "flat series: electricity and carbon percent changes differ");
    c.expect(std::abs(fd.electricityCost - fd.totalCost) < 1e-9,
             "flat series: electricity and total percent changes differ");
}

// ---------------------------------------------------------------------------
// Criterion 6: 60 noisy ramp profiles (20 per template, L = 128, sigma = 1%
// of range) cluster back to the template partition with ARI >= 0.9 under both
// metrics at k = 3, and the k sweep over 2..8 suggests 3 — all within 30 s.

void criterionTemplateRecovery(Checker& c) {
    const auto start = std::chrono::steady_clock::now();
    ProfileSetSpec spec;
    spec.instancesPerTemplate = 20;
    spec.length = 128;
    spec.noiseFraction = 0.01;
    spec.seed = 99;
    const ProfileSet set = generateProfileSet(spec);

    FitParams params;
    params.k = 3;
    params.seed = 7;
    const ClusterModel euclid = fitKMeans(set.profiles, params);
    const double ariEuclid = testsupport::adjustedRandIndex(set.labels, euclid.assignments);
    c.expect(ariEuclid >= 0.9, "euclidean ARI " + fmt(ariEuclid) + " < 0.9");

    FitParams dtwParams = params;
    dtwParams.metric = Metric::parse("dtw");
    const ClusterModel dtw = fitKMeans(set.profiles, dtwParams);
    const double ariDtw = testsupport::adjustedRandIndex(set.labels, dtw.assignments);
    c.expect(ariDtw >= 0.9, "dtw ARI " + fmt(ariDtw) + " < 0.9");

    const KSweepReport sweep = sweepK(set.profiles, 2, 8, params);
    c.expect(sweep.suggestedK == 3,
             "k sweep suggested " + std::to_string(sweep.suggestedK) + ", expected 3");

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(seconds < 30.0, "criterion took " + fmt(seconds) + " s, budget is 30 s");
}

// ---------------------------------------------------------------------------
// Criterion 7: synthetic telemetry with N melts segments into exactly N
// cycles for N in {1, 5, 20}; a constant-temperature series yields none.

void criterionMeltRecovery(Checker& c) {
    for (const int n : {1, 5, 20}) {
        SyntheticSpec spec;
        MeltTemplate tpl;
        tpl.rampDurationS = 3600.0;
        tpl.startTempC = 900.0;
        tpl.peakTempC = 1500.0;
        spec.templates = {tpl};
        spec.meltsPerTemplate = n;
        spec.seed = static_cast<std::uint64_t>(n);
        const SyntheticResult data = generateTelemetry(spec);
        const SegmentationParams params;
        const auto endpoints = detectMeltEndpoints(data.frame, params);
        const auto segments = extractMelts(data.frame, endpoints, params);
        c.expect(static_cast<int>(segments.size()) == n,
                 "expected " + std::to_string(n) + " melts, segmented " +
                     std::to_string(segments.size()));
    }

    TelemetryFrame constant;
    constant.fieldNames = {fields::kMeltTemperature};
    constant.timestamps = Eigen::VectorXd::LinSpaced(400, 0.0, 399.0 * 60.0);
    constant.values = Eigen::MatrixXd::Constant(400, 1, 1000.0);
    const SegmentationParams params;
    const auto endpoints = detectMeltEndpoints(constant, params);
    c.expect(endpoints.empty(), "constant series produced " +
                                    std::to_string(endpoints.size()) + " endpoints");
    const auto segments = extractMelts(constant, endpoints, params);
    c.expect(segments.empty(), "constant series produced segments");
}

// ---------------------------------------------------------------------------
// Criterion 8: the warping distance matches an exhaustive path-enumeration
// oracle on 50 short pairs within 1e-12, and never exceeds the pointwise
// distance across 500 random pairs.

void criterionDtwOracle(Checker& c) {
    UnitRng rng(8086);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = rng.intIn(1, 6);
        const Eigen::VectorXd a = testsupport::randomVector(rng, n, -5.0, 5.0);
        const Eigen::VectorXd b = testsupport::randomVector(rng, n, -5.0, 5.0);
        const double expected = testsupport::exhaustiveDtw(a, b);
        const double got = dtwDistance(a, b);
        if (std::abs(got - expected) > kExactTolerance * (1.0 + expected))
            c.failures.push_back("oracle mismatch on trial " + std::to_string(trial) +
                                 ": got " + fmt(got) + ", expected " + fmt(expected));
    }
    for (int trial = 0; trial < 500; ++trial) {
        const Eigen::Index n = rng.intIn(2, 24);
        const Eigen::VectorXd a = testsupport::randomVector(rng, n, -5.0, 5.0);
        const Eigen::VectorXd b = testsupport::randomVector(rng, n, -5.0, 5.0);
        const double warped = dtwDistance(a, b);
        const double pointwise = euclideanDistance(a, b);
        if (warped > pointwise + kExactTolerance) {
            c.failures.push_back("dtw exceeded euclidean on trial " + std::to_string(trial));
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// Criterion 9: the CLI pipeline is deterministic — two runs over the same
// generated data produce byte-identical artifacts.

void criterionDeterminism(Checker& c) {
    TempDir dir("acceptance_det");
    const std::string data = dir.file("data");
    const int synthExit = runCommand("\"" MELTLINE_SYNTH_BIN "\" --out \"" + data +
                                     "\" --seed 31 --melts 8 >/dev/null 2>&1");
    c.expect(synthExit == 0, "generator exited " + std::to_string(synthExit));
    if (synthExit != 0) return;

    const std::string conf = (fs::path(data) / "pipeline.conf").string();
    for (const char* run : {"a", "b"}) {
        const int exit =
            runCommand("\"" MELTLINE_BIN "\" pipeline --config \"" + conf + "\" --out \"" +
                       dir.file(run) + "\" --plots >/dev/null 2>&1");
        c.expect(exit == 0, std::string("pipeline run ") + run + " exited " +
                                std::to_string(exit));
        if (exit != 0) return;
    }

    const auto filesA = artifactFiles(dir.file("a"));
    const auto filesB = artifactFiles(dir.file("b"));
    c.expect(filesA == filesB, "the two runs wrote different artifact sets");
    c.expect(filesA.size() >= 14, "suspiciously few artifacts: " +
                                      std::to_string(filesA.size()));
    if (filesA != filesB) return;
    for (const auto& rel : filesA) {
        const std::string a = testsupport::slurp((fs::path(dir.file("a")) / rel).string());
        const std::string b = testsupport::slurp((fs::path(dir.file("b")) / rel).string());
        if (a != b) c.failures.push_back("artifact differs between runs: " + rel);
    }
}

} // namespace

int main() {
    struct Criterion {
        const char* title;
        std::function<void(Checker&)> body;
    };
    const std::vector<Criterion> criteria = {
        {"reference ratings reproduced by all five methods", criterionReferenceRatings},
        {"unanimous best-practice cluster", criterionUnanimousBest},
        {"TOPSIS and mTOPSIS agreement profile", criterionTopsisAgreement},
        {"rank invariance under criterion rescaling", criterionScaleInvariance},
        {"published savings percentages", criterionSavings},
        {"template recovery by clustering and the k sweep", criterionTemplateRecovery},
        {"melt-count recovery from synthetic telemetry", criterionMeltRecovery},
        {"warping distance against an exhaustive oracle", criterionDtwOracle},
        {"byte-identical pipeline artifacts", criterionDeterminism},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checker checker;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].body(checker);
        } catch (const Error& e) {
            checker.failures.push_back(std::string("unexpected error [") + e.code() +
                                       "]: " + e.what());
        } catch (const std::exception& e) {
            checker.failures.push_back(std::string("unexpected exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = checker.failures.empty();
        std::printf("criterion %zu: %s ... %s (%.2f s)\n", i + 1, criteria[i].title,
                    ok ? "PASS" : "FAIL", seconds);
        if (!ok) {
            ++failed;
            for (const auto& reason : checker.failures)
                std::printf("  - %s\n", reason.c_str());
        }
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
                criteria.size());
    return failed;
}
