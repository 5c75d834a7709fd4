#include "bmscrew/centerline.hpp"

#include <cmath>

namespace bmscrew::rod {

Centerline::Centerline(double tip_offset, double drillable_length, double stations_per_mm)
    : delta_(tip_offset), length_(drillable_length), stations_per_mm_(stations_per_mm) {
    if (length_ < 0.0) throw InvalidGeometry("drillable_length", "must be non-negative");
    if (length_ == 0.0 && delta_ != 0.0)
        throw InvalidGeometry("drillable_length", "zero-length tunnel cannot carry an offset");
    if (delta_ < 0.0) throw InvalidGeometry("tip_offset", "must be non-negative");
    if (!(stations_per_mm_ > 0.0)) throw InvalidGeometry("stations_per_mm", "must be positive");
    total_arc_ = length_ == 0.0 ? 0.0 : arc_length_at_x(length_);
}

double Centerline::y_at_x(double x) const {
    if (length_ == 0.0) return 0.0;
    return delta_ * (x / length_) * (x / length_);
}

double Centerline::slope_at_x(double x) const {
    if (length_ == 0.0) return 0.0;
    return 2.0 * delta_ * x / (length_ * length_);
}

double Centerline::arc_length_at_x(double x) const {
    // y' = a*x with a = 2*delta/L^2; integral of sqrt(1 + a^2 x^2) dx.
    double a = 2.0 * delta_ / (length_ * length_);
    if (a == 0.0) return x;
    double ax = a * x;
    return 0.5 * (x * std::sqrt(1.0 + ax * ax) + std::asinh(ax) / a);
}

double Centerline::x_at_s(double s) const {
    if (s < -1e-12 || s > total_arc_ * (1.0 + 1e-12))
        throw OutOfRange("arc length outside [0, total_arc_length]");
    s = std::fmin(std::fmax(s, 0.0), total_arc_);
    if (delta_ == 0.0) return s;
    double x = s * length_ / total_arc_;
    for (int it = 0; it < 50; ++it) {
        double f = arc_length_at_x(x) - s;
        double sl = slope_at_x(x);
        double d = std::sqrt(1.0 + sl * sl);  // ds/dx >= 1
        double step = f / d;
        x -= step;
        x = std::fmin(std::fmax(x, 0.0), length_);
        if (std::abs(step) < 1e-13 * std::max(1.0, length_)) break;
    }
    return x;
}

double Centerline::curvature_at_x(double x) const {
    if (length_ == 0.0) return 0.0;
    double ypp = 2.0 * delta_ / (length_ * length_);
    double yp = slope_at_x(x);
    return std::abs(ypp) / std::pow(1.0 + yp * yp, 1.5);
}

double Centerline::curvature_at_s(double s) const {
    return curvature_at_x(x_at_s(s));
}

}  // namespace bmscrew::rod
