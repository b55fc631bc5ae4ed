#include "meltline/mcdm.hpp"

#include "meltline/csv.hpp"
#include "meltline/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace meltline {

namespace {

void checkShape(const DecisionMatrix& matrix, const std::vector<double>& weights) {
    const Eigen::Index m = matrix.values.rows();
    const Eigen::Index n = matrix.values.cols();
    if (m == 0 || n == 0) fail("BadMatrix", "decision matrix is empty");
    if (static_cast<Eigen::Index>(matrix.alternatives.size()) != m ||
        static_cast<Eigen::Index>(matrix.criteria.size()) != n)
        fail("BadMatrix", "matrix labels disagree with its shape");
    if (!matrix.values.allFinite()) fail("BadMatrix", "matrix values must be finite");
    if (static_cast<Eigen::Index>(weights.size()) != n)
        fail("BadWeights", "expected one weight per criterion");
    double sum = 0.0;
    for (const double w : weights) {
        if (w < 0.0) fail("BadWeights", "weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) fail("BadWeights", "weights must sum to 1");
}

bool allCost(const DecisionMatrix& matrix) {
    return std::all_of(matrix.criteria.begin(), matrix.criteria.end(),
                       [](const CriterionSpec& c) { return c.direction == Direction::Cost; });
}

bool allBenefit(const DecisionMatrix& matrix) {
    return std::all_of(matrix.criteria.begin(), matrix.criteria.end(),
                       [](const CriterionSpec& c) { return c.direction == Direction::Benefit; });
}

std::vector<int> rankOrder(const std::vector<int>& ids, const Eigen::VectorXd& scores,
                           Orientation orientation) {
    std::vector<size_t> order(ids.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const double sa = scores(static_cast<Eigen::Index>(a));
        const double sb = scores(static_cast<Eigen::Index>(b));
        if (sa != sb) return orientation == Orientation::MinBest ? sa < sb : sa > sb;
        return ids[a] < ids[b];
    });
    std::vector<int> ranking(ids.size());
    for (size_t i = 0; i < order.size(); ++i) ranking[i] = ids[order[i]];
    return ranking;
}

MethodScores makeScores(std::string method, const DecisionMatrix& matrix,
                        Eigen::VectorXd scores, Orientation orientation) {
    MethodScores out;
    out.method = std::move(method);
    out.scores = std::move(scores);
    out.orientation = orientation;
    out.ranking = rankOrder(matrix.alternatives, out.scores, orientation);
    return out;
}

} // namespace

NormalizedMatrix normalizeVector(const DecisionMatrix& matrix) {
    if (!matrix.values.allFinite()) fail("BadMatrix", "matrix values must be finite");
    NormalizedMatrix norm;
    norm.values = matrix.values;
    for (Eigen::Index j = 0; j < matrix.values.cols(); ++j) {
        const double columnNorm = matrix.values.col(j).norm();
        if (columnNorm == 0.0)
            fail("ZeroColumn", "criterion '" + matrix.criteria[static_cast<size_t>(j)].name +
                                   "' is identically zero");
        norm.values.col(j) /= columnNorm;
    }
    for (const auto& criterion : matrix.criteria) norm.directions.push_back(criterion.direction);
    return norm;
}

DecisionMatrix toBenefit(const DecisionMatrix& matrix) {
    DecisionMatrix out = matrix;
    for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
        auto& criterion = out.criteria[static_cast<size_t>(j)];
        if (criterion.direction == Direction::Benefit) continue;
        const double best = out.values.col(j).minCoeff();
        if (best <= 0.0)
            fail("NonPositiveEntry", "cost criterion '" + criterion.name +
                                         "' has non-positive values; reciprocal transform "
                                         "undefined");
        out.values.col(j) = best / out.values.col(j).array();
        criterion.direction = Direction::Benefit;
    }
    return out;
}

MethodScores scoreSaw(const DecisionMatrix& matrix, const std::vector<double>& weights) {
    checkShape(matrix, weights);
    if (!allCost(matrix) && !allBenefit(matrix))
        fail("MixedDirections", "SAW needs direction-homogeneous criteria; apply the "
                                "cost-to-benefit transform first");
    const NormalizedMatrix norm = normalizeVector(matrix);
    const Eigen::VectorXd w =
        Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
    return makeScores("SAW", matrix, norm.values * w,
                      allCost(matrix) ? Orientation::MinBest : Orientation::MaxBest);
}

MethodScores scoreMew(const DecisionMatrix& matrix, const std::vector<double>& weights) {
    checkShape(matrix, weights);
    if (!allCost(matrix) && !allBenefit(matrix))
        fail("MixedDirections", "MEW needs direction-homogeneous criteria; apply the "
                                "cost-to-benefit transform first");
    const NormalizedMatrix norm = normalizeVector(matrix);
    if ((norm.values.array() <= 0.0).any())
        fail("NonPositiveEntry", "MEW requires strictly positive normalized values");
    Eigen::VectorXd scores(norm.values.rows());
    for (Eigen::Index i = 0; i < norm.values.rows(); ++i) {
        double logScore = 0.0;
        for (Eigen::Index j = 0; j < norm.values.cols(); ++j)
            logScore += weights[static_cast<size_t>(j)] * std::log(norm.values(i, j));
        scores(i) = std::exp(logScore);
    }
    return makeScores("MEW", matrix, std::move(scores),
                      allCost(matrix) ? Orientation::MinBest : Orientation::MaxBest);
}

namespace {

MethodScores closenessScores(std::string method, const DecisionMatrix& matrix,
                             const Eigen::MatrixXd& space,
                             const Eigen::VectorXd& distanceWeights) {
    const Eigen::Index m = space.rows();
    Eigen::VectorXd ideal(space.cols()), antiIdeal(space.cols());
    for (Eigen::Index j = 0; j < space.cols(); ++j) {
        const bool cost =
            matrix.criteria[static_cast<size_t>(j)].direction == Direction::Cost;
        ideal(j) = cost ? space.col(j).minCoeff() : space.col(j).maxCoeff();
        antiIdeal(j) = cost ? space.col(j).maxCoeff() : space.col(j).minCoeff();
    }
    Eigen::VectorXd scores(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto row = space.row(i).transpose();
        const double dPlus =
            std::sqrt((distanceWeights.array() * (row - ideal).array().square()).sum());
        const double dMinus =
            std::sqrt((distanceWeights.array() * (row - antiIdeal).array().square()).sum());
        const double denom = dPlus + dMinus;
        scores(i) = denom > 0.0 ? dMinus / denom : 0.5;
    }
    return makeScores(std::move(method), matrix, std::move(scores), Orientation::MaxBest);
}

} // namespace

MethodScores scoreTopsis(const DecisionMatrix& matrix, const std::vector<double>& weights) {
    checkShape(matrix, weights);
    if (matrix.values.rows() < 2)
        fail("SingleAlternative", "TOPSIS needs at least two alternatives");
    const NormalizedMatrix norm = normalizeVector(matrix);
    Eigen::MatrixXd weighted = norm.values;
    for (Eigen::Index j = 0; j < weighted.cols(); ++j)
        weighted.col(j) *= weights[static_cast<size_t>(j)];
    return closenessScores("TOPSIS", matrix, weighted,
                           Eigen::VectorXd::Ones(weighted.cols()));
}

MethodScores scoreMtopsis(const DecisionMatrix& matrix, const std::vector<double>& weights) {
    checkShape(matrix, weights);
    if (matrix.values.rows() < 2)
        fail("SingleAlternative", "mTOPSIS needs at least two alternatives");
    const NormalizedMatrix norm = normalizeVector(matrix);
    const Eigen::VectorXd w =
        Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
    return closenessScores("mTOPSIS", matrix, norm.values, w);
}

MethodScores scoreVikor(const DecisionMatrix& matrix, const std::vector<double>& weights,
                        double v) {
    checkShape(matrix, weights);
    if (v < 0.0 || v > 1.0) fail("BadParams", "VIKOR v must lie in [0, 1]");
    const Eigen::Index m = matrix.values.rows();
    const Eigen::Index n = matrix.values.cols();

    Eigen::VectorXd s(m), r(m);
    s.setZero();
    r.setZero();
    for (Eigen::Index j = 0; j < n; ++j) {
        const bool cost = matrix.criteria[static_cast<size_t>(j)].direction == Direction::Cost;
        const double best = cost ? matrix.values.col(j).minCoeff()
                                 : matrix.values.col(j).maxCoeff();
        const double worst = cost ? matrix.values.col(j).maxCoeff()
                                  : matrix.values.col(j).minCoeff();
        if (best == worst)
            fail("ConstantColumn", "criterion '" +
                                       matrix.criteria[static_cast<size_t>(j)].name +
                                       "' does not discriminate between alternatives");
        for (Eigen::Index i = 0; i < m; ++i) {
            const double addend = weights[static_cast<size_t>(j)] *
                                  (cost ? (matrix.values(i, j) - best) / (worst - best)
                                        : (best - matrix.values(i, j)) / (best - worst));
            s(i) += addend;
            r(i) = std::max(r(i), addend);
        }
    }

    const double sBest = s.minCoeff(), sWorst = s.maxCoeff();
    const double rBest = r.minCoeff(), rWorst = r.maxCoeff();
    Eigen::VectorXd q(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        // A degenerate spread (all S equal, or all R equal) zeroes that term.
        const double sTerm = sWorst > sBest ? (s(i) - sBest) / (sWorst - sBest) : 0.0;
        const double rTerm = rWorst > rBest ? (r(i) - rBest) / (rWorst - rBest) : 0.0;
        q(i) = v * sTerm + (1.0 - v) * rTerm;
    }

    MethodScores out = makeScores("VIKOR", matrix, std::move(q), Orientation::MinBest);
    VikorFlags flags;
    if (m >= 2) {
        const Eigen::Index first = matrix.rowOf(out.ranking[0]);
        const Eigen::Index second = matrix.rowOf(out.ranking[1]);
        flags.acceptableAdvantage =
            out.scores(second) - out.scores(first) >= 1.0 / static_cast<double>(m - 1);
        const auto byS = rankOrder(matrix.alternatives, s, Orientation::MinBest);
        const auto byR = rankOrder(matrix.alternatives, r, Orientation::MinBest);
        flags.acceptableStability = byS[0] == out.ranking[0] || byR[0] == out.ranking[0];
    }
    out.vikor = flags;
    return out;
}

RankingTable rankAll(const DecisionMatrix& matrix, const std::vector<double>& weights,
                     double v) {
    RankingTable table;
    table.alternatives = matrix.alternatives;

    const auto tryMethod = [&](const char* name, auto&& scorer) {
        try {
            table.methods.push_back(scorer());
        } catch (const Error& e) {
            table.unavailable.emplace_back(name, e.code());
        }
    };
    tryMethod("SAW", [&] { return scoreSaw(matrix, weights); });
    tryMethod("MEW", [&] { return scoreMew(matrix, weights); });
    tryMethod("TOPSIS", [&] { return scoreTopsis(matrix, weights); });
    tryMethod("mTOPSIS", [&] { return scoreMtopsis(matrix, weights); });
    tryMethod("VIKOR", [&] { return scoreVikor(matrix, weights, v); });
    if (table.methods.empty())
        fail("NoMethod", "no ranking method is applicable to this matrix");

    if (table.methods.size() == kMethodNames.size()) {
        const int first = table.methods.front().ranking.front();
        const bool unanimous =
            std::all_of(table.methods.begin(), table.methods.end(),
                        [&](const MethodScores& m) { return m.ranking.front() == first; });
        if (unanimous) table.unanimousBest = first;
    }

    double bestMean = std::numeric_limits<double>::infinity();
    for (const int id : matrix.alternatives) {
        double meanRank = 0.0;
        for (const auto& method : table.methods) {
            const auto pos = std::find(method.ranking.begin(), method.ranking.end(), id);
            meanRank += static_cast<double>(pos - method.ranking.begin());
        }
        meanRank /= static_cast<double>(table.methods.size());
        if (meanRank < bestMean || (meanRank == bestMean && id < table.consensusBest)) {
            bestMean = meanRank;
            table.consensusBest = id;
        }
    }
    return table;
}

void writeRankingsCsv(const RankingTable& table, const std::string& path) {
    CsvTable csv;
    csv.header.push_back("cluster");
    for (const char* name : kMethodNames) csv.header.push_back(name);
    for (size_t i = 0; i < table.alternatives.size(); ++i) {
        std::vector<std::string> row{std::to_string(table.alternatives[i])};
        for (const char* name : kMethodNames) {
            const auto it = std::find_if(table.methods.begin(), table.methods.end(),
                                         [&](const MethodScores& m) { return m.method == name; });
            row.push_back(it == table.methods.end()
                              ? std::string{}
                              : formatFixed(it->scores(static_cast<Eigen::Index>(i)), 5));
        }
        csv.rows.push_back(std::move(row));
    }
    writeCsv(path, csv);
}

std::string rankingsJson(const RankingTable& table) {
    nlohmann::json j;
    j["format"] = "meltline/rankings/v1";
    j["alternatives"] = table.alternatives;
    j["methods"] = nlohmann::json::array();
    for (const auto& method : table.methods) {
        nlohmann::json m;
        m["method"] = method.method;
        m["orientation"] =
            method.orientation == Orientation::MinBest ? "min_best" : "max_best";
        m["scores"] = std::vector<double>(method.scores.data(),
                                          method.scores.data() + method.scores.size());
        m["ranking"] = method.ranking;
        if (method.vikor) {
            m["acceptable_advantage"] = method.vikor->acceptableAdvantage;
            m["acceptable_stability"] = method.vikor->acceptableStability;
        }
        j["methods"].push_back(m);
    }
    j["unavailable"] = nlohmann::json::array();
    for (const auto& [name, code] : table.unavailable)
        j["unavailable"].push_back({{"method", name}, {"error", code}});
    if (table.unanimousBest)
        j["unanimous_best"] = *table.unanimousBest;
    else
        j["unanimous_best"] = nullptr;
    j["consensus_best"] = table.consensusBest;
    return j.dump(2) + "\n";
}

} // namespace meltline
