#pragma once

#include <cmath>

namespace ckn {

// C-infinity compact bump in the squared radial variable q = (|z|/R)^2:
// B(q) = exp(-1/(1-q)) on q < 1, 0 beyond. Working in q avoids the |z| = 0
// kink that the radial form has, so spatial derivatives stay analytic.
inline double bump_q(double q) {
    if (q >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - q));
}

// dB/dq = -B(q) / (1-q)^2.
inline double bump_q_d1(double q) {
    if (q >= 1.0) return 0.0;
    const double w = 1.0 - q;
    return -bump_q(q) / (w * w);
}

// d2B/dq2 = B(q) * (1 - 2(1-q)) / (1-q)^4.
inline double bump_q_d2(double q) {
    if (q >= 1.0) return 0.0;
    const double w = 1.0 - q;
    return bump_q(q) * (1.0 - 2.0 * w) / (w * w * w * w);
}

// Monotone C-infinity step: 0 for s <= 0, 1 for s >= 1.
inline double smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

// d/ds of smooth_step.
inline double smooth_step_d1(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    const double da = a / (s * s);
    const double db = -b / ((1.0 - s) * (1.0 - s));
    const double sum = a + b;
    return (da * sum - a * (da + db)) / (sum * sum);
}

} // namespace ckn
