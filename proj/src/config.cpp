#include "meltline/config.hpp"

#include "meltline/csv.hpp"
#include "meltline/error.hpp"
#include "meltline/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

namespace meltline {

namespace {

std::string trim(const std::string& s) {
    size_t lo = s.find_first_not_of(" \t\r");
    if (lo == std::string::npos) return {};
    size_t hi = s.find_last_not_of(" \t\r");
    return s.substr(lo, hi - lo + 1);
}

} // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
    ConfigFile config;
    std::istringstream in(text);
    std::string line, section;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3)
                fail("BadConfig", "malformed section header at line " + std::to_string(lineNo));
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                fail("BadConfig", "empty section name at line " + std::to_string(lineNo));
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            fail("BadConfig", "expected key = value at line " + std::to_string(lineNo));
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) fail("BadConfig", "empty key at line " + std::to_string(lineNo));
        const std::string full = section.empty() ? key : section + "." + key;
        if (config.entries.count(full))
            fail("BadConfig", "duplicate key '" + full + "' at line " + std::to_string(lineNo));
        config.entries[full] = trim(t.substr(eq + 1));
    }
    return config;
}

ConfigFile ConfigFile::load(const std::string& path) {
    return parse(readTextFile(path));
}

std::string ConfigFile::serialize() const {
    // Group by section; std::map already orders sections and keys.
    std::ostringstream out;
    std::string section;
    bool first = true;
    for (const auto& [key, value] : entries) {
        const size_t dot = key.find('.');
        const std::string keySection = dot == std::string::npos ? "" : key.substr(0, dot);
        const std::string bare = dot == std::string::npos ? key : key.substr(dot + 1);
        if (keySection != section || first) {
            if (!first) out << "\n";
            if (!keySection.empty()) out << "[" << keySection << "]\n";
            section = keySection;
            first = false;
        }
        out << bare << " = " << value << "\n";
    }
    return out.str();
}

bool ConfigFile::has(const std::string& key) const { return entries.count(key) > 0; }

std::string ConfigFile::get(const std::string& key, const std::string& fallback) const {
    const auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second;
}

double ConfigFile::getDouble(const std::string& key, double fallback) const {
    const auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    double v;
    if (!parseDoubleStrict(it->second, v))
        fail("BadConfig", "key '" + key + "' is not a number: '" + it->second + "'");
    return v;
}

int ConfigFile::getInt(const std::string& key, int fallback) const {
    const double v = getDouble(key, static_cast<double>(fallback));
    if (v != std::floor(v) || std::abs(v) > 2147483647.0)
        fail("BadConfig", "key '" + key + "' is not an integer");
    return static_cast<int>(v);
}

std::uint64_t ConfigFile::getUint64(const std::string& key, std::uint64_t fallback) const {
    const auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    try {
        size_t used = 0;
        const unsigned long long v = std::stoull(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        fail("BadConfig", "key '" + key + "' is not an unsigned integer: '" + it->second + "'");
    }
}

bool ConfigFile::getBool(const std::string& key, bool fallback) const {
    const auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    fail("BadConfig", "key '" + key + "' is not a boolean: '" + it->second + "'");
}

namespace {

std::string resolvePath(const std::string& value, const std::string& baseDir) {
    if (value.empty()) return value;
    std::filesystem::path p(value);
    if (p.is_absolute() || baseDir.empty()) return p.lexically_normal().string();
    return (std::filesystem::path(baseDir) / p).lexically_normal().string();
}

std::vector<double> parseWeights(const std::string& text) {
    std::vector<double> weights;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        double v;
        const std::string t = trim(item);
        if (!parseDoubleStrict(t, v))
            fail("BadConfig", "mcdm.weights entry is not a number: '" + t + "'");
        weights.push_back(v);
    }
    if (weights.empty()) fail("BadConfig", "mcdm.weights is empty");
    return weights;
}

const std::set<std::string> kKnownKeys = {
    "telemetry.csv",
    "segmentation.min_endpoint_temp_C",
    "segmentation.min_drop_C",
    "segmentation.min_segment_samples",
    "segmentation.min_segment_duration_s",
    "cluster.profile_length",
    "cluster.normalize",
    "cluster.metric",
    "cluster.k",
    "cluster.k_min",
    "cluster.k_max",
    "cluster.seed",
    "cluster.n_init",
    "cluster.max_iter",
    "cluster.tol",
    "mcdm.weights",
    "mcdm.vikor_v",
    "costs.prices_csv",
    "costs.emissions_csv",
    "costs.tax_dkk_per_kg",
    "rank.matrix_csv",
    "output.dir",
    "output.plots",
};

} // namespace

PipelineConfig PipelineConfig::fromConfig(const ConfigFile& file, const std::string& baseDir) {
    for (const auto& [key, value] : file.entries) {
        (void)value;
        if (key.rfind("telemetry.schema.", 0) == 0) continue;
        if (!kKnownKeys.count(key)) fail("BadConfig", "unknown config key '" + key + "'");
    }

    PipelineConfig config;
    config.telemetryCsv = resolvePath(file.get("telemetry.csv", ""), baseDir);
    for (const auto& [key, value] : file.entries)
        if (key.rfind("telemetry.schema.", 0) == 0)
            config.schemaMap[key.substr(std::string("telemetry.schema.").size())] = value;

    config.segmentation.minEndpointTempC =
        file.getDouble("segmentation.min_endpoint_temp_C", config.segmentation.minEndpointTempC);
    config.segmentation.minDropC =
        file.getDouble("segmentation.min_drop_C", config.segmentation.minDropC);
    config.segmentation.minSegmentSamples = file.getInt("segmentation.min_segment_samples",
                                                        config.segmentation.minSegmentSamples);
    config.segmentation.minSegmentDurationS = file.getDouble(
        "segmentation.min_segment_duration_s", config.segmentation.minSegmentDurationS);

    config.profileLength = file.getInt("cluster.profile_length", config.profileLength);
    config.normalizeProfiles = file.getBool("cluster.normalize", config.normalizeProfiles);
    config.metric = Metric::parse(file.get("cluster.metric", "euclidean"));
    if (file.has("cluster.k")) config.k = file.getInt("cluster.k", 0);
    config.kMin = file.getInt("cluster.k_min", config.kMin);
    config.kMax = file.getInt("cluster.k_max", config.kMax);
    config.seed = file.getUint64("cluster.seed", config.seed);
    config.nInit = file.getInt("cluster.n_init", config.nInit);
    config.maxIter = file.getInt("cluster.max_iter", config.maxIter);
    config.tol = file.getDouble("cluster.tol", config.tol);

    if (file.has("mcdm.weights")) config.weights = parseWeights(file.get("mcdm.weights", ""));
    config.vikorV = file.getDouble("mcdm.vikor_v", config.vikorV);

    config.pricesCsv = resolvePath(file.get("costs.prices_csv", ""), baseDir);
    config.emissionsCsv = resolvePath(file.get("costs.emissions_csv", ""), baseDir);
    config.taxDkkPerKg = file.getDouble("costs.tax_dkk_per_kg", config.taxDkkPerKg);

    config.matrixCsv = resolvePath(file.get("rank.matrix_csv", ""), baseDir);

    config.outDir = resolvePath(file.get("output.dir", ""), baseDir);
    config.plots = file.getBool("output.plots", config.plots);

    config.validate();
    return config;
}

PipelineConfig PipelineConfig::fromFile(const std::string& path) {
    const std::string baseDir = std::filesystem::path(path).parent_path().string();
    return fromConfig(ConfigFile::load(path), baseDir);
}

std::vector<double> PipelineConfig::weightsFor(size_t criterionCount) const {
    if (weights.empty())
        return std::vector<double>(criterionCount, 1.0 / static_cast<double>(criterionCount));
    if (weights.size() != criterionCount)
        fail("BadWeights", "mcdm.weights has " + std::to_string(weights.size()) +
                               " entries but the matrix has " +
                               std::to_string(criterionCount) + " criteria");
    double sum = 0.0;
    for (const double w : weights) sum += w;
    std::vector<double> normalized = weights;
    for (double& w : normalized) w /= sum;
    return normalized;
}

void PipelineConfig::validate() const {
    segmentation.validate();
    if (profileLength < 2) fail("BadConfig", "cluster.profile_length must be >= 2");
    if (k && *k < 1) fail("BadConfig", "cluster.k must be >= 1");
    if (kMin < 2 || kMax < kMin)
        fail("BadConfig", "cluster.k_min/k_max must satisfy 2 <= k_min <= k_max");
    if (nInit < 1) fail("BadConfig", "cluster.n_init must be >= 1");
    if (maxIter < 1) fail("BadConfig", "cluster.max_iter must be >= 1");
    if (!(tol > 0.0)) fail("BadConfig", "cluster.tol must be > 0");
    if (!weights.empty()) {
        double weightSum = 0.0;
        for (const double w : weights) {
            if (w < 0.0) fail("BadConfig", "mcdm.weights must be non-negative");
            weightSum += w;
        }
        if (weightSum <= 0.0) fail("ZeroWeightSum", "mcdm.weights sum to zero");
    }
    if (vikorV < 0.0 || vikorV > 1.0) fail("BadConfig", "mcdm.vikor_v must lie in [0, 1]");
    if (taxDkkPerKg < 0.0) fail("BadConfig", "costs.tax_dkk_per_kg must be >= 0");
    for (const auto& [field, column] : schemaMap) {
        (void)column;
        if (!isCanonicalField(field))
            fail("BadConfig", "telemetry.schema." + field + " is not a known field");
    }
}

} // namespace meltline
