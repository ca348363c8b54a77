#include "ckn/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "ckn/errors.hpp"

namespace ckn {

namespace {

// One piece of the composite rule over [i, i+1], stencils chosen by what the
// array offers. Exact for cubics; O(h^4) composite error.
double piece(const std::vector<double>& f, double h, std::size_t i) {
    const std::size_t n = f.size();
    if (i >= 1 && i + 2 < n)
        return h * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]) / 24.0;
    if (i + 3 < n)
        return h * (9.0 * f[i] + 19.0 * f[i + 1] - 5.0 * f[i + 2] + f[i + 3]) / 24.0;
    return h * (9.0 * f[i + 1] + 19.0 * f[i] - 5.0 * f[i - 1] + f[i - 2]) / 24.0;
}

struct GaussLegendre {
    std::vector<double> x, w;
};

// Nodes and weights on [-1, 1] by Newton iteration on the Legendre
// recurrence; standard construction.
GaussLegendre gauss_legendre(int n) {
    GaussLegendre gl;
    gl.x.resize(n);
    gl.w.resize(n);
    const double pi = 3.14159265358979323846264338327950288;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        gl.x[i] = x;
        gl.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return gl;
}

const GaussLegendre& face_rule() {
    static const GaussLegendre gl = gauss_legendre(48);
    return gl;
}

} // namespace

double cubic_segment_integral(const std::vector<double>& f, double h, std::size_t i0,
                              std::size_t i1) {
    if (f.size() < 4)
        throw RangeError("cubic segment rule needs at least 4 samples");
    if (i1 >= f.size() || i0 > i1)
        throw RangeError("cubic segment rule: index window out of range");
    double acc = 0.0;
    for (std::size_t i = i0; i < i1; ++i) acc += piece(f, h, i);
    return acc;
}

std::vector<double> cubic_segment_prefix(const std::vector<double>& f, double h) {
    if (f.size() < 4)
        throw RangeError("cubic segment rule needs at least 4 samples");
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + piece(f, h, i - 1);
    return out;
}

std::vector<double> window_overlap_weights(const std::vector<double>& times, double h,
                                           double a, double b) {
    std::vector<double> w(times.size(), 0.0);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double lo = std::max(a, times[i] - 0.5 * h);
        const double hi = std::min(b, times[i] + 0.5 * h);
        if (hi > lo) w[i] = hi - lo;
    }
    return w;
}

double cell_weight_integral(double p, double h) {
    if (!(p > -3.0))
        throw ConfigError("cell weight: exponent must satisfy p > -3 for integrability");
    const GaussLegendre& gl = face_rule();
    double face = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < gl.x.size(); ++j) {
            const double s = 1.0 + gl.x[i] * gl.x[i] + gl.x[j] * gl.x[j];
            row += gl.w[j] * std::pow(s, 0.5 * p);
        }
        face += gl.w[i] * row;
    }
    const double q = p + 3.0;
    return std::pow(0.5 * h, q) / q * 6.0 * face;
}

double unit_cell_inverse_distance() {
    return 3.0 * std::log(2.0 + std::sqrt(3.0)) - 0.5 * 3.14159265358979323846264338327950288;
}

} // namespace ckn
