#include "meltline/config.hpp"
#include "meltline/csv.hpp"
#include "meltline/decision.hpp"
#include "meltline/error.hpp"
#include "meltline/hourly_series.hpp"
#include "meltline/kmeans.hpp"
#include "meltline/pipeline.hpp"
#include "meltline/segmentation.hpp"
#include "meltline/synthetic.hpp"
#include "meltline/telemetry.hpp"

#include "support/test_support.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

using namespace meltline;
using testsupport::TempDir;

namespace fs = std::filesystem;

namespace {

// Three clearly separated ramp shapes, four melts each, ~1.5k rows.
SyntheticSpec pipelineSpec() {
    SyntheticSpec spec;
    spec.templates = {
        {1800.0, 900.0, 1450.0, 4200.0, 9.0},
        {2700.0, 900.0, 1800.0, 3600.0, 9.5},
        {3600.0, 900.0, 2200.0, 3200.0, 10.0},
    };
    spec.meltsPerTemplate = 4;
    spec.cadenceS = 30.0;
    spec.idleGapS = 900.0;
    spec.idleTempC = 900.0;
    spec.seed = 17;
    spec.startTime = parseIso8601("2030-01-01T00:00:00Z");
    return spec;
}

PipelineConfig writeInputs(const TempDir& dir) {
    const SyntheticResult data = generateTelemetry(pipelineSpec());
    writeTelemetryCsv(data.frame, dir.file("telemetry.csv"));
    writeHourlySeriesCsv(data.prices, "price_dkk_per_kwh", dir.file("prices.csv"));
    writeHourlySeriesCsv(data.emissions, "co2_kg_per_kwh", dir.file("emissions.csv"));

    PipelineConfig config;
    config.telemetryCsv = dir.file("telemetry.csv");
    config.pricesCsv = dir.file("prices.csv");
    config.emissionsCsv = dir.file("emissions.csv");
    config.profileLength = 64;
    config.kMin = 2;
    config.kMax = 4;
    config.seed = 123;
    return config;
}

std::vector<std::string> listFiles(const fs::path& root) {
    std::vector<std::string> rel;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file())
            rel.push_back(fs::relative(entry.path(), root).string());
    std::sort(rel.begin(), rel.end());
    return rel;
}

struct CliResult {
    int exit = -1;
    std::string out;
    std::string err;
};

CliResult runCli(const std::string& args, const TempDir& dir,
                 const std::string& envPrefix = "") {
    const std::string outFile = dir.file("cli_stdout.txt");
    const std::string errFile = dir.file("cli_stderr.txt");
    const std::string cmd = envPrefix + "\"" + MELTLINE_BIN + "\" " + args + " >\"" +
                            outFile + "\" 2>\"" + errFile + "\"";
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = testsupport::slurp(outFile);
    result.err = testsupport::slurp(errFile);
    return result;
}

} // namespace

TEST_SUITE_BEGIN("pipeline");

TEST_CASE("config files resolve relative paths against their own directory") {
    TempDir dir("conf");
    writeTextFile(dir.file("run.conf"),
                  "[telemetry]\n"
                  "csv = data/telemetry.csv\n"
                  "schema.melt_temperature_C = TempC\n"
                  "[cluster]\n"
                  "metric = dtw:5\n"
                  "k = 3\n"
                  "[mcdm]\n"
                  "weights = 0.4, 0.3, 0.2, 0.1\n"
                  "[costs]\n"
                  "prices_csv = /abs/prices.csv\n"
                  "[output]\n"
                  "dir = out\n");
    const PipelineConfig config = PipelineConfig::fromFile(dir.file("run.conf"));
    CHECK(config.telemetryCsv == (dir.path() / "data/telemetry.csv").lexically_normal().string());
    CHECK(config.pricesCsv == "/abs/prices.csv"); // absolute paths pass through
    CHECK(config.outDir == (dir.path() / "out").lexically_normal().string());
    CHECK(config.schemaMap.at("melt_temperature_C") == "TempC");
    CHECK(config.metric.name() == "dtw:5");
    REQUIRE(config.k.has_value());
    CHECK(*config.k == 3);
    REQUIRE(config.weights.size() == 4);
    CHECK(config.weights[0] == doctest::Approx(0.4));
    CHECK(config.weights[3] == doctest::Approx(0.1));
}

TEST_CASE("unknown config keys are rejected, schema keys are not") {
    try {
        PipelineConfig::fromConfig(ConfigFile::parse("[cluster]\nbogus = 1\n"), "");
        FAIL("expected BadConfig");
    } catch (const Error& e) {
        CHECK(e.code() == "BadConfig");
    }
    CHECK_THROWS_AS(
        PipelineConfig::fromConfig(ConfigFile::parse("[telemetry]\nschema.not_a_field = X\n"),
                                   ""),
        Error);
    // A plausible typo: section misspelled.
    CHECK_THROWS_AS(
        PipelineConfig::fromConfig(ConfigFile::parse("[clusters]\nk = 3\n"), ""), Error);
}

TEST_CASE("config validation guards every numeric range") {
    const auto parse = [](const std::string& text) {
        return PipelineConfig::fromConfig(ConfigFile::parse(text), "");
    };
    CHECK_THROWS_AS(parse("[mcdm]\nvikor_v = 1.5\n"), Error);
    CHECK_THROWS_AS(parse("[costs]\ntax_dkk_per_kg = -1\n"), Error);
    CHECK_THROWS_AS(parse("[cluster]\nk_min = 1\n"), Error);
    CHECK_THROWS_AS(parse("[cluster]\nk_max = 1\n"), Error);
    CHECK_THROWS_AS(parse("[cluster]\nprofile_length = 1\n"), Error);
    CHECK_THROWS_AS(parse("[cluster]\ntol = 0\n"), Error);
    CHECK_THROWS_AS(parse("[cluster]\nmetric = euclid\n"), Error);
    CHECK_THROWS_AS(parse("[mcdm]\nweights = 0,0,0,0\n"), Error);
    CHECK_THROWS_AS(parse("[mcdm]\nweights = 0.5,oops\n"), Error);
    CHECK(parse("[cluster]\nseed = 18446744073709551615\n").seed ==
          18446744073709551615ULL);
}

TEST_CASE("missing weights mean equal weights; given ones are normalized") {
    PipelineConfig config;
    const auto equal = config.weightsFor(4);
    REQUIRE(equal.size() == 4);
    for (const double w : equal) CHECK(w == doctest::Approx(0.25));

    config.weights = {2.0, 2.0, 4.0};
    const auto scaled = config.weightsFor(3);
    CHECK(scaled[0] == doctest::Approx(0.25));
    CHECK(scaled[1] == doctest::Approx(0.25));
    CHECK(scaled[2] == doctest::Approx(0.5));

    try {
        config.weightsFor(4);
        FAIL("expected BadWeights");
    } catch (const Error& e) {
        CHECK(e.code() == "BadWeights");
    }
}

TEST_CASE("stages build on each other's artifacts") {
    TempDir dir("stages");
    PipelineConfig config = writeInputs(dir);
    config.outDir = dir.file("run");

    runStage("ingest-report", config);
    CHECK(fs::exists(fs::path(config.outDir) / artifacts::kCompleteness));
    CHECK(fs::exists(fs::path(config.outDir) / artifacts::kCleanedTelemetry));

    runStage("segment", config);
    const auto segments =
        readSegments((fs::path(config.outDir) / artifacts::kSegments).string(),
                     (fs::path(config.outDir) / artifacts::kTracesDir).string());
    CHECK(segments.size() == 12);

    runStage("sweep-k", config);
    const auto sweep = nlohmann::json::parse(
        testsupport::slurp((fs::path(config.outDir) / artifacts::kKSweep).string()));
    CHECK(sweep.at("format") == "meltline/ksweep/v1");
    CHECK(sweep.at("suggested_k") == 3);

    runStage("cluster", config); // picks up the suggestion
    const auto assignments = readAssignmentsCsv(
        (fs::path(config.outDir) / artifacts::kAssignments).string());
    CHECK(assignments.size() == 12);
    CHECK(fs::exists(fs::path(config.outDir) / artifacts::kCentroids));
    CHECK(fs::exists(fs::path(config.outDir) / artifacts::kClusterModel));

    runStage("matrix", config);
    const DecisionMatrix matrix = readDecisionMatrixCsv(
        (fs::path(config.outDir) / artifacts::kDecisionMatrix).string());
    CHECK(matrix.alternatives.size() == 3);
    CHECK(matrix.criteria.size() == 4);

    runStage("rank", config);
    CHECK(fs::exists(fs::path(config.outDir) / artifacts::kRankingsCsv));
    const auto rankings = nlohmann::json::parse(
        testsupport::slurp((fs::path(config.outDir) / artifacts::kRankingsJson).string()));
    CHECK(rankings.at("format") == "meltline/rankings/v1");

    runStage("savings", config);
    CHECK(fs::exists(fs::path(config.outDir) / artifacts::kSavings));
    CHECK(fs::exists(fs::path(config.outDir) / artifacts::kSavingsPerMelt));
    CHECK(fs::exists(fs::path(config.outDir) / artifacts::kSavingsJson));

    // Only the full pipeline stage writes the manifest.
    CHECK_FALSE(fs::exists(fs::path(config.outDir) / artifacts::kManifest));

    // A stage fed a tampered upstream artifact refuses to run on it.
    const std::string ksweepPath = (fs::path(config.outDir) / artifacts::kKSweep).string();
    writeTextFile(ksweepPath, "{\"format\": \"meltline/ksweep/v999\"}\n");
    try {
        runStage("cluster", config);
        FAIL("expected StaleArtifact");
    } catch (const Error& e) {
        CHECK(e.code() == "StaleArtifact");
    }
    writeTextFile(ksweepPath, "{\"suggested_k\": 3}\n");
    CHECK_THROWS_AS(runStage("cluster", config), Error); // no format tag
    writeTextFile(ksweepPath, "not json\n");
    try {
        runStage("cluster", config);
        FAIL("expected BadManifest");
    } catch (const Error& e) {
        CHECK(e.code() == "BadManifest");
    }
}

TEST_CASE("a stage without its inputs names the missing artifact") {
    TempDir dir("missing");
    PipelineConfig config = writeInputs(dir);
    config.outDir = dir.file("fresh");
    try {
        runStage("segment", config);
        FAIL("expected MissingArtifact");
    } catch (const Error& e) {
        CHECK(e.code() == "MissingArtifact");
    }
    CHECK_THROWS_AS(runStage("frobnicate", config), Error);
    PipelineConfig noOut = config;
    noOut.outDir.clear();
    CHECK_THROWS_AS(runStage("segment", noOut), Error);
}

TEST_CASE("a held lock blocks a second run into the same directory") {
    TempDir dir("lock");
    PipelineConfig config = writeInputs(dir);
    config.outDir = dir.file("run");
    fs::create_directories(config.outDir);
    writeTextFile((fs::path(config.outDir) / ".lock").string(), "");
    try {
        runStage("ingest-report", config);
        FAIL("expected OutDirLocked");
    } catch (const Error& e) {
        CHECK(e.code() == "OutDirLocked");
    }
    fs::remove(fs::path(config.outDir) / ".lock");
    runStage("ingest-report", config); // and the lock is gone afterwards
    CHECK_FALSE(fs::exists(fs::path(config.outDir) / ".lock"));
}

TEST_CASE("two pipeline runs produce byte-identical artifact trees") {
    TempDir dir("det");
    PipelineConfig config = writeInputs(dir);
    config.plots = true;

    config.outDir = dir.file("a");
    runStage("pipeline", config);
    config.outDir = dir.file("b");
    runStage("pipeline", config);

    const auto filesA = listFiles(dir.file("a"));
    const auto filesB = listFiles(dir.file("b"));
    REQUIRE(filesA == filesB);
    CHECK(filesA.size() >= 14); // all artifacts, traces, and plots
    for (const auto& rel : filesA)
        CHECK_MESSAGE(testsupport::slurp((fs::path(dir.file("a")) / rel).string()) ==
                          testsupport::slurp((fs::path(dir.file("b")) / rel).string()),
                      "artifact differs between runs: ", rel);

    const auto manifest = nlohmann::json::parse(
        testsupport::slurp((fs::path(dir.file("a")) / artifacts::kManifest).string()));
    CHECK(manifest.at("format") == "meltline/manifest/v1");
    CHECK(manifest.at("parameters").at("seed") == 123);
    CHECK(manifest.at("artifacts").size() >= 13);
}

TEST_CASE("cli: help and argument errors") {
    TempDir dir("cli");
    CliResult help = runCli("--help", dir);
    CHECK(help.exit == 0);
    CHECK(help.out.find("pipeline") != std::string::npos);

    CliResult bare = runCli("", dir);
    CHECK(bare.exit == 2);
    CHECK(bare.err.find("rank") != std::string::npos);

    CliResult unknown = runCli("frobnicate", dir);
    CHECK(unknown.exit == 2);
}

TEST_CASE("cli: configuration problems exit 2 with machine-readable JSON") {
    TempDir dir("clicfg");
    writeTextFile(dir.file("bad.conf"), "[cluster]\nbogus = 1\n");
    CliResult result =
        runCli("rank --config \"" + dir.file("bad.conf") + "\" --out \"" + dir.file("out") +
                   "\"",
               dir);
    CHECK(result.exit == 2);
    const auto json = nlohmann::json::parse(result.out);
    CHECK(json.at("error") == "BadConfig");
    CHECK(json.at("stage") == "config");

    CliResult missing = runCli("rank --config \"" + dir.file("nope.conf") + "\"", dir);
    CHECK(missing.exit == 2);
}

TEST_CASE("cli: stage failures exit 1 and name the stage") {
    TempDir dir("clistage");
    CliResult result = runCli("rank --out \"" + dir.file("out") + "\"", dir);
    CHECK(result.exit == 1);
    const auto json = nlohmann::json::parse(result.out);
    CHECK(json.at("error") == "MissingArtifact");
    CHECK(json.at("stage") == "rank");
}

TEST_CASE("cli: ranking the bundled reference matrix") {
    TempDir dir("clirank");
    const std::string conf = testsupport::fixturePath("rank_foundry.conf");
    CliResult result =
        runCli("rank --config \"" + conf + "\" --out \"" + dir.file("out") + "\"", dir);
    REQUIRE(result.exit == 0);

    const auto json = nlohmann::json::parse(
        testsupport::slurp((fs::path(dir.file("out")) / artifacts::kRankingsJson).string()));
    CHECK(json.at("unanimous_best") == 3);

    const CsvTable table =
        readCsv((fs::path(dir.file("out")) / artifacts::kRankingsCsv).string());
    REQUIRE(table.rows.size() == 12);
    REQUIRE(table.header ==
            std::vector<std::string>{"cluster", "SAW", "MEW", "TOPSIS", "mTOPSIS", "VIKOR"});
    const auto& row3 = table.rows[3];
    CHECK(std::abs(testsupport::toDouble(row3[1]) - 0.21649) < 1e-4);
    CHECK(std::abs(testsupport::toDouble(row3[2]) - 0.20874) < 1e-4);
    CHECK(std::abs(testsupport::toDouble(row3[3]) - 1.0) < 1e-4);
}

TEST_CASE("cli: MELTLINE_LOG gates diagnostics on stderr") {
    TempDir dir("clilog");
    const std::string conf = testsupport::fixturePath("rank_foundry.conf");
    const std::string args =
        "rank --config \"" + conf + "\" --out \"" + dir.file("quiet") + "\"";
    CliResult quiet = runCli(args, dir);
    REQUIRE(quiet.exit == 0);
    CHECK(quiet.err.find("meltline: info") == std::string::npos);

    const std::string verboseArgs =
        "rank --config \"" + conf + "\" --out \"" + dir.file("loud") + "\"";
    CliResult loud = runCli(verboseArgs, dir, "MELTLINE_LOG=debug ");
    REQUIRE(loud.exit == 0);
    CHECK(loud.err.find("meltline: info: rank") != std::string::npos);
}

TEST_SUITE_END();
