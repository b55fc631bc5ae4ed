#pragma once

#include "meltline/decision.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace meltline {

// Vector (Euclidean-norm) column normalization; directions pass through.
struct NormalizedMatrix {
    Eigen::MatrixXd values;
    std::vector<Direction> directions;
};

NormalizedMatrix normalizeVector(const DecisionMatrix& matrix);

// Reciprocal cost-to-benefit transform: x -> min_i x_ij / x_ij on cost
// columns. SAW and MEW require a direction-homogeneous matrix; this is the
// explicit way to get one from a mixed matrix.
DecisionMatrix toBenefit(const DecisionMatrix& matrix);

enum class Orientation { MinBest, MaxBest };

struct VikorFlags {
    bool acceptableAdvantage = false;
    bool acceptableStability = false;
};

struct MethodScores {
    std::string method;
    Eigen::VectorXd scores;
    Orientation orientation = Orientation::MaxBest;
    std::vector<int> ranking; // alternative ids, best first, ties id-ascending
    std::optional<VikorFlags> vikor;
};

MethodScores scoreSaw(const DecisionMatrix& matrix, const std::vector<double>& weights);
MethodScores scoreMew(const DecisionMatrix& matrix, const std::vector<double>& weights);
MethodScores scoreTopsis(const DecisionMatrix& matrix, const std::vector<double>& weights);
MethodScores scoreMtopsis(const DecisionMatrix& matrix, const std::vector<double>& weights);
MethodScores scoreVikor(const DecisionMatrix& matrix, const std::vector<double>& weights,
                        double v);

struct RankingTable {
    std::vector<int> alternatives;
    std::vector<MethodScores> methods; // the methods that ran
    std::vector<std::pair<std::string, std::string>> unavailable; // (method, error code)
    std::optional<int> unanimousBest; // set iff rank-1 under all five methods
    int consensusBest = -1;           // lowest mean rank over available methods
};

RankingTable rankAll(const DecisionMatrix& matrix, const std::vector<double>& weights, double v);

inline constexpr std::array<const char*, 5> kMethodNames = {"SAW", "MEW", "TOPSIS", "mTOPSIS",
                                                            "VIKOR"};

void writeRankingsCsv(const RankingTable& table, const std::string& path);
std::string rankingsJson(const RankingTable& table);

} // namespace meltline
