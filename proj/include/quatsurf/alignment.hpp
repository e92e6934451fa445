#pragma once

// Least-squares fits between two point clouds with matching node order.

#include <array>
#include <span>

#include "quatsurf/quaternion.hpp"

namespace quatsurf {

struct RigidFit {
    std::array<double, 9> rotation{};  // row-major, det = +1
    Quaternion translation;
    double rms = 0.0;  // RMS of |R a + t - b| over finite pairs
};

// Best proper rigid motion carrying a onto b (Kabsch).
RigidFit rigid_align(std::span<const Quaternion> a, std::span<const Quaternion> b);

struct SimilarityFit {
    double scale = 0.0;
    Quaternion translation;
    double rms = 0.0;  // RMS of |s a + t - b|
};

// Best real scale and translation carrying a onto b.
SimilarityFit scale_translation_fit(std::span<const Quaternion> a, std::span<const Quaternion> b);

// RMS of |a - b - c| after removing the best constant c.
double rms_up_to_translation(std::span<const Quaternion> a, std::span<const Quaternion> b);

}  // namespace quatsurf
