#pragma once

#include <utility>
#include <vector>

#include "bmscrew/centerline.hpp"
#include "bmscrew/model.hpp"

namespace bmscrew::plan {

/// Drilling and manipulator parameters.
struct DrillParams {
    double feed_rate = 0.15;        // mm/s
    double spindle_speed = 2250.0;  // rev/min
    double drill_diameter = 8.5;    // mm
    double manipulator_length = 35.0;  // mm
    double manipulator_od = 6.0;    // mm
    double manipulator_id = 4.0;    // mm

    void validate() const;
};

/// Monotone piecewise-linear cable-tension -> tip-deflection map through the
/// implicit (0, 0) anchor; clamped to the last anchor beyond it.
class CalibrationModel {
public:
    /// Anchors are (tension N, deflection mm); tensions must be positive and
    /// distinct, deflections non-decreasing with tension.
    explicit CalibrationModel(std::vector<std::pair<double, double>> anchors);

    double deflection(double tension) const;
    const std::vector<std::pair<double, double>>& anchors() const { return anchors_; }

private:
    std::vector<std::pair<double, double>> anchors_;  // includes (0, 0)
};

inline CalibrationModel calibrate(std::vector<std::pair<double, double>> anchors) {
    return CalibrationModel(std::move(anchors));
}

inline double tension_to_tip_deflection(const CalibrationModel& m, double tension) {
    return m.deflection(tension);
}

/// Drilled tunnel: planar quadratic centerline plus diameter.
struct TunnelSpec {
    rod::Centerline centerline;
    double diameter = 0.0;      // mm
    double source_tension = 0.0;  // N, provenance (0 when not tension-derived)
};

inline model::InterferenceReport interference(const model::ValidatedScrewSpec& spec,
                                              const TunnelSpec& tunnel) {
    return model::interference(spec, tunnel.diameter);
}

/// Single-section constant-curvature arc in one bending plane.
struct SnakeShape {
    double curvature = 0.0;   // 1/mm
    double arc_length = 0.0;  // mm
    double tip_x = 0.0;       // mm
    double tip_y = 0.0;       // mm, lateral offset
    double tip_angle = 0.0;   // rad
};

/// Constant-curvature arc whose tip lateral offset matches the calibrated
/// deflection: solves (1 - cos(kappa L)) / kappa = offset by bracketed
/// bisection. Throws NoSolution when the offset is at or beyond the arc
/// reachability bound.
SnakeShape snake_shape(double tension, const CalibrationModel& m, const DrillParams& d);

/// Largest tip offset a single arc of length L can reach (at the turning
/// point of (1 - cos(u))/u * L, tan(u/2) = u).
double snake_reachability_bound(double manipulator_length);

/// Quadratic tunnel with L = manipulator_length and delta = calibrated tip
/// deflection; diameter = drill_diameter.
TunnelSpec generate_tunnel(double tension, const CalibrationModel& m, const DrillParams& d);

/// Centerline arc length divided by the feed rate, seconds.
double drill_time(const TunnelSpec& t, const DrillParams& d);

}  // namespace bmscrew::plan
