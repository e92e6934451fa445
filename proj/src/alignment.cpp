#include "quatsurf/alignment.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "quatsurf/errors.hpp"

namespace quatsurf {

namespace {

Eigen::Vector3d vec(const Quaternion& q) { return {q.x, q.y, q.z}; }

void check(std::span<const Quaternion> a, std::span<const Quaternion> b, const char* op) {
    if (a.size() != b.size() || a.empty()) throw ValidationError("alignment", op, "point sets must match and be non-empty");
}

template <class F>
std::size_t for_finite(std::span<const Quaternion> a, std::span<const Quaternion> b, F f) {
    std::size_t count = 0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        if (!a[n].is_finite() || !b[n].is_finite()) continue;
        f(vec(a[n]), vec(b[n]));
        ++count;
    }
    return count;
}

}  // namespace

RigidFit rigid_align(std::span<const Quaternion> a, std::span<const Quaternion> b) {
    check(a, b, "rigid_align");
    Eigen::Vector3d ca = Eigen::Vector3d::Zero(), cb = Eigen::Vector3d::Zero();
    const std::size_t count = for_finite(a, b, [&](const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
        ca += p;
        cb += q;
    });
    if (count == 0) throw ValidationError("alignment", "rigid_align", "no finite point pairs");
    ca /= static_cast<double>(count);
    cb /= static_cast<double>(count);
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for_finite(a, b, [&](const Eigen::Vector3d& p, const Eigen::Vector3d& q) { cov += (q - cb) * (p - ca).transpose(); });
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
    const Eigen::Matrix3d r = svd.matrixU() * d * svd.matrixV().transpose();
    const Eigen::Vector3d t = cb - r * ca;

    RigidFit fit;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) fit.rotation[static_cast<std::size_t>(3 * i + j)] = r(i, j);
    }
    fit.translation = Quaternion::vector(t.x(), t.y(), t.z());
    double s = 0.0;
    for_finite(a, b, [&](const Eigen::Vector3d& p, const Eigen::Vector3d& q) { s += (r * p + t - q).squaredNorm(); });
    fit.rms = std::sqrt(s / static_cast<double>(count));
    return fit;
}

SimilarityFit scale_translation_fit(std::span<const Quaternion> a, std::span<const Quaternion> b) {
    check(a, b, "scale_translation_fit");
    Eigen::Vector3d ca = Eigen::Vector3d::Zero(), cb = Eigen::Vector3d::Zero();
    const std::size_t count = for_finite(a, b, [&](const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
        ca += p;
        cb += q;
    });
    if (count == 0) throw ValidationError("alignment", "scale_translation_fit", "no finite point pairs");
    ca /= static_cast<double>(count);
    cb /= static_cast<double>(count);
    double num = 0.0, den = 0.0;
    for_finite(a, b, [&](const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
        num += (p - ca).dot(q - cb);
        den += (p - ca).squaredNorm();
    });
    SimilarityFit fit;
    fit.scale = den > 0.0 ? num / den : 0.0;
    const Eigen::Vector3d t = cb - fit.scale * ca;
    fit.translation = Quaternion::vector(t.x(), t.y(), t.z());
    double s = 0.0;
    for_finite(a, b, [&](const Eigen::Vector3d& p, const Eigen::Vector3d& q) { s += (fit.scale * p + t - q).squaredNorm(); });
    fit.rms = std::sqrt(s / static_cast<double>(count));
    return fit;
}

double rms_up_to_translation(std::span<const Quaternion> a, std::span<const Quaternion> b) {
    check(a, b, "rms_up_to_translation");
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    const std::size_t count =
        for_finite(a, b, [&](const Eigen::Vector3d& p, const Eigen::Vector3d& q) { mean += p - q; });
    if (count == 0) return 0.0;
    mean /= static_cast<double>(count);
    double s = 0.0;
    for_finite(a, b, [&](const Eigen::Vector3d& p, const Eigen::Vector3d& q) { s += (p - q - mean).squaredNorm(); });
    return std::sqrt(s / static_cast<double>(count));
}

}  // namespace quatsurf
