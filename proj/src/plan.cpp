#include "bmscrew/plan.hpp"

#include <algorithm>
#include <cmath>

namespace bmscrew::plan {

void DrillParams::validate() const {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0)) throw InvalidGeometry(field, "must be positive");
    };
    positive(feed_rate, "feed_rate");
    positive(spindle_speed, "spindle_speed");
    positive(drill_diameter, "drill_diameter");
    positive(manipulator_length, "manipulator_length");
    positive(manipulator_od, "manipulator_od");
    positive(manipulator_id, "manipulator_id");
}

CalibrationModel::CalibrationModel(std::vector<std::pair<double, double>> anchors) {
    if (anchors.empty()) throw InvalidGeometry("anchors", "at least one anchor required");
    std::sort(anchors.begin(), anchors.end());
    anchors_.emplace_back(0.0, 0.0);  // implicit origin anchor
    for (const auto& [tension, deflection] : anchors) {
        if (!(tension > 0.0))
            throw InvalidGeometry("anchors", "tensions must be positive");
        if (tension <= anchors_.back().first)
            throw InvalidGeometry("anchors", "tensions must be distinct");
        if (deflection < anchors_.back().second)
            throw NonMonotoneData("deflections decrease with tension");
        anchors_.emplace_back(tension, deflection);
    }
}

double CalibrationModel::deflection(double tension) const {
    if (tension < 0.0) throw NegativeTension("tension must be non-negative");
    if (tension >= anchors_.back().first) return anchors_.back().second;  // clamp
    for (std::size_t i = 1; i < anchors_.size(); ++i) {
        if (tension <= anchors_[i].first) {
            const auto& [t0, d0] = anchors_[i - 1];
            const auto& [t1, d1] = anchors_[i];
            return d0 + (tension - t0) / (t1 - t0) * (d1 - d0);
        }
    }
    return anchors_.back().second;
}

double snake_reachability_bound(double manipulator_length) {
    // Turning point of f(u) = (1 - cos u)/u: tan(u/2) = u, u in (pi/2, pi).
    double lo = 2.0, hi = 3.14;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (std::tan(mid / 2.0) > mid ? hi : lo) = mid;
    }
    double u = 0.5 * (lo + hi);
    return manipulator_length * (1.0 - std::cos(u)) / u;
}

SnakeShape snake_shape(double tension, const CalibrationModel& m, const DrillParams& d) {
    d.validate();
    const double offset = m.deflection(tension);
    const double length = d.manipulator_length;

    SnakeShape s;
    s.arc_length = length;
    if (offset == 0.0) return s;  // straight arc

    if (offset >= snake_reachability_bound(length))
        throw NoSolution("tip offset outside single-arc reachability");

    // offset = (1 - cos(kappa L)) / kappa, monotone increasing on (0, u*/L).
    auto f = [&](double kappa) { return (1.0 - std::cos(kappa * length)) / kappa; };
    double lo = 1e-12, hi = 2.3311223704144226 / length;  // u* where tan(u/2) = u
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < offset ? lo : hi) = mid;
    }
    s.curvature = 0.5 * (lo + hi);
    s.tip_angle = s.curvature * length;
    s.tip_x = std::sin(s.tip_angle) / s.curvature;
    s.tip_y = (1.0 - std::cos(s.tip_angle)) / s.curvature;
    return s;
}

TunnelSpec generate_tunnel(double tension, const CalibrationModel& m, const DrillParams& d) {
    d.validate();
    double delta = m.deflection(tension);
    return TunnelSpec{rod::Centerline(delta, d.manipulator_length), d.drill_diameter, tension};
}

double drill_time(const TunnelSpec& t, const DrillParams& d) {
    if (!(d.feed_rate > 0.0)) throw InvalidGeometry("feed_rate", "must be positive");
    return t.centerline.total_arc_length() / d.feed_rate;
}

}  // namespace bmscrew::plan
