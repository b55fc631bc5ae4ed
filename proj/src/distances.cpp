#include "meltline/distances.hpp"

#include <algorithm>
#include <limits>

namespace meltline {

std::string Metric::name() const {
    if (kind == Kind::Euclidean) return "euclidean";
    if (bandWidth) return "dtw:" + std::to_string(*bandWidth);
    return "dtw";
}

Metric Metric::parse(const std::string& text) {
    Metric m;
    if (text == "euclidean") {
        m.kind = Kind::Euclidean;
        return m;
    }
    if (text == "dtw") {
        m.kind = Kind::Dtw;
        return m;
    }
    if (text.rfind("dtw:", 0) == 0) {
        m.kind = Kind::Dtw;
        try {
            size_t used = 0;
            const int band = std::stoi(text.substr(4), &used);
            if (used != text.size() - 4 || band < 0) throw std::invalid_argument(text);
            m.bandWidth = band;
        } catch (const std::exception&) {
            fail("BadMetric", "bad DTW band in metric '" + text + "'");
        }
        return m;
    }
    fail("BadMetric", "unknown metric '" + text + "' (use euclidean, dtw, or dtw:<band>)");
}

namespace {

inline double sq(double d) { return d * d; }

void checkDtwInputs(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) fail("LengthMismatch", "series differ in length");
    if (a.size() == 0) fail("LengthMismatch", "series are empty");
}

} // namespace

double dtwDistance(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   std::optional<int> bandWidth) {
    checkDtwInputs(a, b);
    const Eigen::Index n = a.size();
    const Eigen::Index band = bandWidth ? std::max<Eigen::Index>(0, *bandWidth) : n;
    constexpr double inf = std::numeric_limits<double>::infinity();

    Eigen::VectorXd prev = Eigen::VectorXd::Constant(n, inf);
    Eigen::VectorXd curr = Eigen::VectorXd::Constant(n, inf);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index lo = std::max<Eigen::Index>(0, i - band);
        const Eigen::Index hi = std::min(n - 1, i + band);
        curr.setConstant(inf);
        for (Eigen::Index j = lo; j <= hi; ++j) {
            const double cost = sq(a(i) - b(j));
            double best;
            if (i == 0 && j == 0)
                best = 0.0;
            else {
                best = inf;
                if (i > 0 && j > 0) best = std::min(best, prev(j - 1));
                if (i > 0) best = std::min(best, prev(j));
                if (j > 0) best = std::min(best, curr(j - 1));
            }
            curr(j) = cost + best;
        }
        std::swap(prev, curr);
    }
    return std::sqrt(prev(n - 1));
}

std::vector<std::pair<Eigen::Index, Eigen::Index>>
dtwAlignmentPath(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                 std::optional<int> bandWidth) {
    checkDtwInputs(a, b);
    const Eigen::Index n = a.size();
    const Eigen::Index band = bandWidth ? std::max<Eigen::Index>(0, *bandWidth) : n;
    constexpr double inf = std::numeric_limits<double>::infinity();

    Eigen::MatrixXd acc = Eigen::MatrixXd::Constant(n, n, inf);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index lo = std::max<Eigen::Index>(0, i - band);
        const Eigen::Index hi = std::min(n - 1, i + band);
        for (Eigen::Index j = lo; j <= hi; ++j) {
            const double cost = sq(a(i) - b(j));
            double best;
            if (i == 0 && j == 0)
                best = 0.0;
            else {
                best = inf;
                if (i > 0 && j > 0) best = std::min(best, acc(i - 1, j - 1));
                if (i > 0) best = std::min(best, acc(i - 1, j));
                if (j > 0) best = std::min(best, acc(i, j - 1));
            }
            acc(i, j) = cost + best;
        }
    }

    std::vector<std::pair<Eigen::Index, Eigen::Index>> path;
    Eigen::Index i = n - 1, j = n - 1;
    path.emplace_back(i, j);
    while (i > 0 || j > 0) {
        double best = inf;
        int step = -1; // 0 diag, 1 up (advance a), 2 left
        if (i > 0 && j > 0 && acc(i - 1, j - 1) < best) {
            best = acc(i - 1, j - 1);
            step = 0;
        }
        if (i > 0 && acc(i - 1, j) < best) {
            best = acc(i - 1, j);
            step = 1;
        }
        if (j > 0 && acc(i, j - 1) < best) {
            best = acc(i, j - 1);
            step = 2;
        }
        if (step == 0) {
            --i;
            --j;
        } else if (step == 1) {
            --i;
        } else {
            --j;
        }
        path.emplace_back(i, j);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

double profileDistance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Metric& metric) {
    if (metric.kind == Metric::Kind::Euclidean) return euclideanDistance(a, b);
    return dtwDistance(a, b, metric.bandWidth);
}

} // namespace meltline
