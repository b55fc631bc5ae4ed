#pragma once

#include "meltline/distances.hpp"
#include "meltline/segmentation.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace meltline {

// INI-style key/value file: `[section]` headers, `key = value` lines, `#` or
// `;` comments. Entries are addressed as "section.key".
struct ConfigFile {
    std::map<std::string, std::string> entries;

    static ConfigFile parse(const std::string& text);
    static ConfigFile load(const std::string& path);
    std::string serialize() const;

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double getDouble(const std::string& key, double fallback) const;
    int getInt(const std::string& key, int fallback) const;
    std::uint64_t getUint64(const std::string& key, std::uint64_t fallback) const;
    bool getBool(const std::string& key, bool fallback) const;
};

// Everything the CLI stages need, with defaults matching the documented keys.
struct PipelineConfig {
    // [telemetry]
    std::string telemetryCsv;
    std::map<std::string, std::string> schemaMap; // canonical field -> source column

    // [segmentation]
    SegmentationParams segmentation;

    // [cluster]
    int profileLength = 128;
    bool normalizeProfiles = false;
    Metric metric;
    std::optional<int> k; // absent: use the sweep suggestion
    int kMin = 2;
    int kMax = 8;
    std::uint64_t seed = 0;
    int nInit = 10;
    int maxIter = 100;
    double tol = 1e-4;

    // [mcdm]
    std::vector<double> weights; // empty: equal weights over the matrix
    double vikorV = 0.5;

    // Normalized weights for an n-criteria matrix.
    std::vector<double> weightsFor(size_t criterionCount) const;

    // [costs]
    std::string pricesCsv;
    std::string emissionsCsv;
    double taxDkkPerKg = 0.75;

    // [rank] optional: rank an external matrix instead of this run's artifact
    std::string matrixCsv;

    // [output]
    std::string outDir;
    bool plots = false;

    // Relative paths in the file are resolved against its directory.
    static PipelineConfig fromFile(const std::string& path);
    static PipelineConfig fromConfig(const ConfigFile& file, const std::string& baseDir);

    void validate() const;
};

} // namespace meltline
