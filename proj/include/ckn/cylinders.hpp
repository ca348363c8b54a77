#pragma once

#include <array>
#include <vector>

#include "ckn/grid.hpp"
#include "ckn/snapshot.hpp"

namespace ckn {

// Parabolic cylinder over the ball B(x, r): the standard variant spans
// (t - r^2, t], the shifted variant (t - (7/8) r^2, t + (1/8) r^2].
enum class CylinderVariant { standard, shifted };

struct ParabolicCylinder {
    double t = 0.0;
    std::array<double, 3> x{0.0, 0.0, 0.0};
    double r = 0.0;
    CylinderVariant variant = CylinderVariant::standard;

    double time_lo() const {
        return variant == CylinderVariant::standard ? t - r * r : t - 0.875 * r * r;
    }
    double time_hi() const {
        return variant == CylinderVariant::standard ? t : t + 0.125 * r * r;
    }

    // The cylinder must sit inside the trajectory's time range and the box
    // core (r <= box/4 keeps the ball clear of min-image ambiguity).
    void validate(const TorusGrid& g, double traj_start, double traj_end) const;
};

// Sparse cell weights for the ball: fraction of the 8 cell corners inside
// B(x, r). Pairs of (flat index, fraction), ascending index order. The
// corner rule is exactly covariant under the dilation relabeling.
struct BallWeights {
    std::vector<std::pair<std::size_t, double>> cells;
    std::vector<std::size_t> inside_centers; // cells whose center is in the ball
};

BallWeights ball_weights(const TorusGrid& g, const std::array<double, 3>& x, double r);

} // namespace ckn
