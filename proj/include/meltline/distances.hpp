#pragma once

#include "meltline/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace meltline {

// Distance used for clustering. DTW may carry a Sakoe-Chiba band half-width;
// band 0 degenerates to the diagonal (pointwise) alignment.
struct Metric {
    enum class Kind { Euclidean, Dtw };

    Kind kind = Kind::Euclidean;
    std::optional<int> bandWidth; // DTW only

    std::string name() const;
    static Metric parse(const std::string& text);
};

template <typename DerivedA, typename DerivedB>
double euclideanDistance(const Eigen::MatrixBase<DerivedA>& a,
                         const Eigen::MatrixBase<DerivedB>& b) {
    if (a.size() != b.size()) fail("LengthMismatch", "series differ in length");
    return std::sqrt((a.derived().array() - b.derived().array()).square().sum());
}

double dtwDistance(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   std::optional<int> bandWidth = std::nullopt);

// Optimal warping path as (i, j) index pairs from (0, 0) to (n-1, n-1).
// Ties prefer the diagonal step, then the step that advances `a`.
std::vector<std::pair<Eigen::Index, Eigen::Index>>
dtwAlignmentPath(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                 std::optional<int> bandWidth = std::nullopt);

double profileDistance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Metric& metric);

} // namespace meltline
