#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace meltline {

struct PlotSeries {
    std::string label;
    Eigen::VectorXd x;
    Eigen::VectorXd y;
};

void writeLinePlot(const std::string& path, const std::string& title,
                   const std::string& xLabel, const std::string& yLabel,
                   const std::vector<PlotSeries>& series);

void writeBarChart(const std::string& path, const std::string& title,
                   const std::string& xLabel, const std::string& yLabel,
                   const std::vector<std::string>& labels, const Eigen::VectorXd& values);

} // namespace meltline
