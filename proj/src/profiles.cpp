#include "meltline/profiles.hpp"

#include "meltline/error.hpp"

#include <cmath>

namespace meltline {

void ProfileParams::validate() const {
    if (length < 2) fail("BadParams", "profile length must be >= 2");
}

Eigen::VectorXd resampleProfile(const Eigen::VectorXd& times, const Eigen::VectorXd& values,
                                int length) {
    if (length < 2) fail("BadParams", "resample length must be >= 2");
    if (times.size() != values.size())
        fail("LengthMismatch", "times and values differ in length");
    if (times.size() < 2) fail("TooFewRows", "need at least 2 samples to resample");
    if (times(times.size() - 1) == times(0))
        fail("DegenerateSegment", "segment spans zero duration");
    for (Eigen::Index i = 1; i < times.size(); ++i)
        if (times(i) <= times(i - 1))
            fail("NonMonotonicTime", "sample times must be strictly increasing");

    Eigen::VectorXd out(length);
    const double t0 = times(0);
    const double t1 = times(times.size() - 1);
    const double step = (t1 - t0) / (length - 1);
    Eigen::Index seg = 0;
    for (int i = 0; i < length; ++i) {
        const double t = (i == length - 1) ? t1 : t0 + step * i;
        while (seg + 2 < times.size() && times(seg + 1) < t) ++seg;
        const double lo = times(seg), hi = times(seg + 1);
        const double w = (t - lo) / (hi - lo);
        out(i) = values(seg) * (1.0 - w) + values(seg + 1) * w;
    }
    out(0) = values(0);
    out(length - 1) = values(values.size() - 1);
    return out;
}

Eigen::VectorXd zNormalize(const Eigen::VectorXd& x) {
    if (x.size() == 0) return x;
    const double mean = x.mean();
    const double var = (x.array() - mean).square().sum() / x.size();
    const double sd = std::sqrt(var);
    if (sd == 0.0) return Eigen::VectorXd::Zero(x.size());
    return (x.array() - mean) / sd;
}

std::vector<ProfileVector> buildProfiles(const std::vector<MeltSegment>& segments,
                                         const ProfileParams& params) {
    params.validate();
    std::vector<ProfileVector> profiles;
    profiles.reserve(segments.size());
    for (const auto& seg : segments) {
        ProfileVector p;
        p.meltId = seg.id;
        p.values = resampleProfile(seg.sampleTimes, seg.temperatures, params.length);
        if (params.normalize) p.values = zNormalize(p.values);
        profiles.push_back(std::move(p));
    }
    return profiles;
}

Eigen::MatrixXd profileMatrix(const std::vector<ProfileVector>& profiles) {
    if (profiles.empty()) fail("EmptyFrame", "no profiles to stack");
    const Eigen::Index length = profiles.front().values.size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(profiles.size()), length);
    for (size_t i = 0; i < profiles.size(); ++i) {
        if (profiles[i].values.size() != length)
            fail("LengthMismatch", "profiles differ in length");
        m.row(static_cast<Eigen::Index>(i)) = profiles[i].values.transpose();
    }
    return m;
}

} // namespace meltline
