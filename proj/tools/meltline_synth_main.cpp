#include "meltline/config.hpp"
#include "meltline/csv.hpp"
#include "meltline/error.hpp"
#include "meltline/hourly_series.hpp"
#include "meltline/synthetic.hpp"
#include "meltline/telemetry.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

// Generates a self-contained demo data set: synthetic furnace telemetry for
// three melt recipes, matching hourly price/intensity series, the ground-truth
// labels, and a pipeline config wired to the generated files.
int main(int argc, char** argv) {
    CLI::App app{"Synthetic induction-furnace telemetry generator"};
    std::string outDir = "demo_data";
    std::uint64_t seed = 7;
    int meltsPerTemplate = 20;
    app.add_option("--out", outDir, "directory to write the data set into");
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--melts", meltsPerTemplate, "melts per recipe template")
        ->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    try {
        namespace fs = std::filesystem;
        fs::create_directories(outDir);

        meltline::SyntheticSpec spec = meltline::defaultDemoSpec();
        spec.seed = seed;
        spec.meltsPerTemplate = meltsPerTemplate;
        const meltline::SyntheticResult data = meltline::generateTelemetry(spec);

        meltline::writeTelemetryCsv(data.frame, (fs::path(outDir) / "telemetry.csv").string());
        meltline::writeHourlySeriesCsv(data.prices, "price_DKK_per_kWh",
                                       (fs::path(outDir) / "prices.csv").string());
        meltline::writeHourlySeriesCsv(data.emissions, "intensity_kg_CO2_per_kWh",
                                       (fs::path(outDir) / "emissions.csv").string());
        meltline::writeTruthCsv(data.truth, (fs::path(outDir) / "truth.csv").string());

        meltline::ConfigFile config;
        config.entries["telemetry.csv"] = "telemetry.csv";
        config.entries["costs.prices_csv"] = "prices.csv";
        config.entries["costs.emissions_csv"] = "emissions.csv";
        config.entries["cluster.seed"] = std::to_string(seed);
        config.entries["cluster.metric"] = "euclidean";
        config.entries["cluster.k_min"] = "2";
        config.entries["cluster.k_max"] = "8";
        meltline::writeTextFile((fs::path(outDir) / "pipeline.conf").string(),
                                config.serialize());

        std::printf("wrote %d melt cycles to %s\n",
                    static_cast<int>(data.truth.templateOf.size()), outDir.c_str());
    } catch (const meltline::Error& e) {
        std::fprintf(stderr, "meltline-synth: %s\n", e.what());
        return 1;
    }
    return 0;
}
