#include "meltline/config.hpp"
#include "meltline/error.hpp"
#include "meltline/log.hpp"
#include "meltline/pipeline.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <optional>
#include <string>

namespace {

struct CliOptions {
    std::string configPath;
    std::string outDir;
    std::optional<std::uint64_t> seed;
    bool plots = false;
};

void addCommonFlags(CLI::App* cmd, CliOptions& options) {
    cmd->add_option("--config", options.configPath, "pipeline config file");
    cmd->add_option("--out", options.outDir, "output directory (overrides output.dir)");
    cmd->add_option("--seed", options.seed, "clustering seed (overrides cluster.seed)");
    cmd->add_flag("--plots", options.plots, "also write SVG plots");
}

int runSubcommand(const std::string& stage, const CliOptions& options) {
    meltline::PipelineConfig config;
    try {
        if (!options.configPath.empty())
            config = meltline::PipelineConfig::fromFile(options.configPath);
        if (!options.outDir.empty()) config.outDir = options.outDir;
        if (options.seed) config.seed = *options.seed;
        if (options.plots) config.plots = true;
        config.validate();
    } catch (const meltline::Error& e) {
        nlohmann::json j{{"error", e.code()}, {"message", e.what()}, {"stage", "config"}};
        std::printf("%s\n", j.dump().c_str());
        return 2;
    }

    try {
        meltline::runStage(stage, config);
    } catch (const meltline::Error& e) {
        meltline::logError(e.what());
        nlohmann::json j{{"error", e.code()}, {"message", e.what()}, {"stage", stage}};
        std::printf("%s\n", j.dump().c_str());
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json j{{"error", "Internal"}, {"message", e.what()}, {"stage", stage}};
        std::printf("%s\n", j.dump().c_str());
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Best-practice melting-pattern analysis for induction-furnace telemetry"};
    app.require_subcommand(0, 1);

    CliOptions options;
    std::string chosen;
    const std::vector<std::pair<const char*, const char*>> subcommands = {
        {"ingest-report", "load telemetry, report completeness, write the cleaned CSV"},
        {"segment", "cut the cleaned telemetry into melt cycles"},
        {"sweep-k", "fit a range of cluster counts and suggest one"},
        {"cluster", "fit the k-means model and write assignments"},
        {"matrix", "aggregate per-cluster performance into the decision matrix"},
        {"rank", "score clusters with SAW, MEW, TOPSIS, mTOPSIS, and VIKOR"},
        {"savings", "replay all melts at best-practice performance and cost the difference"},
        {"pipeline", "run every stage in order"},
    };
    for (const auto& [name, description] : subcommands) {
        CLI::App* cmd = app.add_subcommand(name, description);
        addCommonFlags(cmd, options);
        cmd->callback([&chosen, name = std::string(name)] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (chosen.empty()) {
        std::fputs(app.help().c_str(), stderr);
        return 2;
    }
    return runSubcommand(chosen, options);
}
