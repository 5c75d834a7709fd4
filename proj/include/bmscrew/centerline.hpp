#pragma once

#include "bmscrew/errors.hpp"

namespace bmscrew::rod {

/// Planar quadratic tunnel centerline y(x) = delta * (x/L)^2, arc-length
/// parameterized on s in [0, total_arc_length()]. The curve starts at the
/// origin with zero slope; delta is the lateral tip offset at x = L.
class Centerline {
public:
    Centerline(double tip_offset, double drillable_length, double stations_per_mm = 10.0);

    double tip_offset() const { return delta_; }
    double drillable_length() const { return length_; }
    double stations_per_mm() const { return stations_per_mm_; }

    /// Total arc length S >= L, with equality iff delta = 0.
    double total_arc_length() const { return total_arc_; }

    double y_at_x(double x) const;
    double slope_at_x(double x) const;

    /// Arc length from the origin to the point at abscissa x (closed form).
    double arc_length_at_x(double x) const;

    /// Inverse of arc_length_at_x; monotone, solved by Newton iteration.
    double x_at_s(double s) const;

    /// kappa = |y''| / (1 + y'^2)^(3/2) at the abscissa corresponding to s.
    double curvature_at_s(double s) const;
    double curvature_at_x(double x) const;

private:
    double delta_;
    double length_;
    double stations_per_mm_;
    double total_arc_;
};

}  // namespace bmscrew::rod
