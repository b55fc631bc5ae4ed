#pragma once

#include "meltline/segmentation.hpp"

#include <Eigen/Dense>

#include <vector>

namespace meltline {

// A melt rendered as a fixed-length temperature curve, ready for clustering.
struct ProfileVector {
    int meltId = -1;
    Eigen::VectorXd values;
};

// Linear interpolation of (times, values) onto `length` evenly spaced points
// spanning [times.front(), times.back()]. Endpoints are reproduced exactly.
Eigen::VectorXd resampleProfile(const Eigen::VectorXd& times, const Eigen::VectorXd& values,
                                int length);

// (x - mean) / stddev, with a zero vector when the input is constant.
Eigen::VectorXd zNormalize(const Eigen::VectorXd& x);

struct ProfileParams {
    int length = 128;
    bool normalize = false;

    void validate() const;
};

std::vector<ProfileVector> buildProfiles(const std::vector<MeltSegment>& segments,
                                         const ProfileParams& params);

// Profiles stacked row-wise; all must share one length.
Eigen::MatrixXd profileMatrix(const std::vector<ProfileVector>& profiles);

} // namespace meltline
