#include "bmscrew/model.hpp"

#include <cmath>

namespace bmscrew::model {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Second moment of a circular segment {y >= h} of a disk of radius R about
// the x axis through the disk center: integral of y^2 * 2*sqrt(R^2-y^2) dy.
double segment_second_moment(double radius, double h) {
    if (h >= radius) return 0.0;
    // Closed form via theta = asin(y/R): I = R^4/4 * (a - sin a cos a (1 - 2 sin^2 a)) ...
    // keep it simple and robust: composite Simpson on a smooth integrand.
    const int n = 512;  // even
    const double a = h;
    const double b = radius;
    const double dy = (b - a) / n;
    auto f = [&](double y) {
        double t = radius * radius - y * y;
        return y * y * 2.0 * std::sqrt(t > 0.0 ? t : 0.0);
    };
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * dy) * (i % 2 ? 4.0 : 2.0);
    return sum * dy / 3.0;
}

double segment_area(double radius, double h) {
    if (h >= radius) return 0.0;
    double alpha = std::acos(h / radius);
    return radius * radius * (alpha - std::sin(alpha) * std::cos(alpha));
}
}  // namespace

double MaterialSpec::shear_yield() const { return yield_strength / std::sqrt(3.0); }

void MaterialSpec::validate() const {
    if (!(youngs_modulus > 0.0))
        throw InvalidMaterial("youngs_modulus", "must be positive");
    if (!(poisson_ratio > 0.0 && poisson_ratio < 0.5))
        throw InvalidMaterial("poisson_ratio", "must lie in (0, 0.5)");
    if (!(yield_strength > 0.0))
        throw InvalidMaterial("yield_strength", "must be positive");
    if (!(ultimate_strength > 0.0))
        throw InvalidMaterial("ultimate_strength", "must be positive");
    if (!(yield_strength < ultimate_strength))
        throw InvalidMaterial("yield_strength", "must be below ultimate_strength");
    if (!(shear_strength > 0.0))
        throw InvalidMaterial("shear_strength", "must be positive");
    if (!(recoverable_strain >= yield_strength / youngs_modulus))
        throw InvalidMaterial("recoverable_strain", "must cover the elastic yield strain");
    if (friction_coefficient < 0.0)
        throw InvalidMaterial("friction_coefficient", "must be non-negative");
}

double superelastic_stress(const MaterialSpec& m, double strain) {
    double e = std::abs(strain);
    if (e <= m.yield_strain()) return m.youngs_modulus * e;
    return m.yield_strength;  // plateau; beyond recoverable_strain the caller flags FAIL
}

NotchPlane orthogonal(NotchPlane p) {
    return p == NotchPlane::A ? NotchPlane::B : NotchPlane::A;
}

std::string to_string(NotchPlane p) { return p == NotchPlane::A ? "a" : "b"; }

NotchPattern default_notch_pattern(const ScrewSpec& spec) {
    NotchPattern n;
    n.depth = (spec.core_diameter - spec.cannula_diameter) / 2.0 + spec.cannula_diameter / 2.0;
    n.width = 1.0;
    n.pitch = spec.thread_pitch;  // one notch per inter-thread valley
    n.start_plane = NotchPlane::A;
    return n;
}

MaterialSpec nitinol() {
    MaterialSpec m;
    m.youngs_modulus = 83000.0;
    m.poisson_ratio = 0.33;
    m.yield_strength = 700.0;
    m.ultimate_strength = 1900.0;
    m.recoverable_strain = 0.06;
    m.shear_strength = 404.0;
    m.friction_coefficient = 0.0;
    return m;
}

MaterialSpec foam_15pcf() {
    // 15 PCF polyurethane foam surrogate; fixture values, not measurements.
    MaterialSpec m;
    m.youngs_modulus = 120.0;
    m.poisson_ratio = 0.3;
    m.yield_strength = 2.3;
    m.ultimate_strength = 4.0;
    m.recoverable_strain = 0.02;
    m.shear_strength = 1.6;
    m.friction_coefficient = 0.4;
    return m;
}

ScrewSpec reference_screw() {
    ScrewSpec s;
    s.core_diameter = 7.5;
    s.outer_diameter = 9.5;
    s.cannula_diameter = 5.0;
    s.overall_length = 50.0;
    s.thread_count = 11;
    s.thread_pitch = 3.175;
    s.thread_form = "V";
    s.tapping_thread_count = 3;
    s.head_tip_radius = 2.0;
    s.material = nitinol();
    s.notches = default_notch_pattern(s);
    return s;
}

ValidatedScrewSpec ValidatedScrewSpec::validate(ScrewSpec spec) {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0)) throw InvalidGeometry(field, "must be positive");
    };
    positive(spec.core_diameter, "core_diameter");
    positive(spec.outer_diameter, "outer_diameter");
    positive(spec.cannula_diameter, "cannula_diameter");
    positive(spec.overall_length, "overall_length");
    positive(spec.thread_pitch, "thread_pitch");
    positive(spec.head_tip_radius, "head_tip_radius");
    if (spec.thread_count <= 0)
        throw InvalidGeometry("thread_count", "must be positive");
    if (spec.tapping_thread_count < 0 || spec.tapping_thread_count > spec.thread_count)
        throw InvalidGeometry("tapping_thread_count", "must not exceed thread_count");
    if (!(spec.cannula_diameter < spec.core_diameter))
        throw InvalidGeometry("cannula_diameter", "must be below core_diameter");
    if (!(spec.core_diameter < spec.outer_diameter))
        throw InvalidGeometry("core_diameter", "must be below outer_diameter");
    if (spec.thread_count * spec.thread_pitch > spec.overall_length)
        throw InvalidGeometry("thread_count", "threaded length exceeds overall_length");
    spec.material.validate();

    if (spec.notches) {
        const NotchPattern& n = *spec.notches;
        double max_depth = spec.core_diameter / 2.0;  // wall + half cannula = core radius
        if (!(n.depth > 0.0 && n.depth <= max_depth))
            throw InvalidGeometry("notches.depth", "must lie in (0, core_radius]");
        positive(n.width, "notches.width");
        positive(n.pitch, "notches.pitch");
        if (!(n.width < n.pitch))
            throw InvalidGeometry("notches.width", "must be below notches.pitch");
    }

    ValidatedScrewSpec v;
    v.spec_ = std::move(spec);

    // Segment layout over the threaded length, measured from the tip-side
    // thread start. Valleys sit between consecutive thread crests; the
    // valley nearest the tip carries start_plane and orientation alternates.
    const ScrewSpec& s = v.spec_;
    const double tl = s.thread_count * s.thread_pitch;
    if (s.notches) {
        const NotchPattern& n = *s.notches;
        double cursor = 0.0;
        int idx = 0;
        for (double center = n.pitch; center + n.width / 2.0 <= tl; center += n.pitch, ++idx) {
            NotchPlane plane = (idx % 2 == 0) ? n.start_plane : orthogonal(n.start_plane);
            double b = center - n.width / 2.0;
            double e = center + n.width / 2.0;
            if (b > cursor)
                v.layout_.push_back({Segment::Kind::ThreadCrest, cursor, b, NotchPlane::A});
            v.layout_.push_back({Segment::Kind::NotchValley, b, e, plane});
            v.hinges_.push_back({center, plane});
            cursor = e;
        }
        if (cursor < tl)
            v.layout_.push_back({Segment::Kind::ThreadCrest, cursor, tl, NotchPlane::A});
    } else {
        v.layout_.push_back({Segment::Kind::ThreadCrest, 0.0, tl, NotchPlane::A});
    }
    return v;
}

double ValidatedScrewSpec::hinge_fiber_offset() const {
    if (!spec_.notches) return outer_radius();
    return core_radius() - spec_.notches->depth;
}

SectionProps annulus_section(double core_diameter, double cannula_diameter, double s) {
    SectionProps p;
    double dc2 = core_diameter * core_diameter;
    double di2 = cannula_diameter * cannula_diameter;
    p.area = kPi * (dc2 - di2) / 4.0;
    double i = kPi * (dc2 * dc2 - di2 * di2) / 64.0;
    p.second_moment_plane_a = i;
    p.second_moment_plane_b = i;
    p.torsion_constant = 2.0 * i;
    p.extreme_fiber_distance_a = core_diameter / 2.0;
    p.extreme_fiber_distance_b = core_diameter / 2.0;
    p.torsion_fiber_distance = core_diameter / 2.0;
    p.station = s;
    p.notched = false;
    return p;
}

SectionProps section_properties(const ValidatedScrewSpec& spec, double s) {
    const ScrewSpec& sp = spec.spec();
    if (s < 0.0 || s > sp.overall_length)
        throw OutOfRange("section station outside [0, overall_length]");

    const Segment* valley = nullptr;
    for (const Segment& seg : spec.layout()) {
        if (seg.kind == Segment::Kind::NotchValley && s >= seg.begin && s <= seg.end) {
            valley = &seg;
            break;
        }
    }
    if (!valley) return annulus_section(sp.core_diameter, sp.cannula_diameter, s);

    const NotchPattern& n = *sp.notches;
    const double R = spec.core_radius();
    const double r = spec.cannula_radius();
    const double h = R - n.depth;  // height of the notch root above the axis
    SectionProps ann = annulus_section(sp.core_diameter, sp.cannula_diameter, s);
    SectionProps p;
    p.station = s;
    p.notched = true;
    p.notch_plane = valley->plane;

    double i_notch, i_orth, area, j, c_notch;
    if (h >= r) {
        // Shallow notch: annulus minus the circular segment above the root.
        double a_seg = segment_area(R, h);
        double i_seg = segment_second_moment(R, h);
        area = ann.area - a_seg;
        i_notch = ann.second_moment_plane_a - i_seg;
        j = ann.torsion_constant - 2.0 * i_seg;
        c_notch = R;
    } else {
        // Two-web model: the cut reaches the through hole, leaving two
        // lateral ligaments tangent to the cannula circle. Web width from
        // circle-chord geometry at the root plane; webs span from the hole
        // bottom to the root plane.
        double w = std::sqrt(R * R - h * h) - std::sqrt(r * r - h * h);
        double t = h + r;
        area = 2.0 * w * t;
        i_notch = 2.0 * (w * t * t * t / 12.0);  // centroidal, bending in the notch plane
        double a = std::max(w, t);
        double b = std::min(w, t);
        j = 2.0 * (a * b * b * b / 3.0);
        c_notch = t / 2.0;
        p.torsion_fiber_distance = b;  // thin-rectangle max-shear equivalence
    }
    // Stiffness orthogonal to the notch plane is treated as the untouched
    // annulus; only the notch's own plane is ligament-reduced.
    i_orth = ann.second_moment_plane_a;

    p.area = area;
    p.torsion_constant = j;
    if (h >= r) p.torsion_fiber_distance = R;
    if (valley->plane == NotchPlane::A) {
        p.second_moment_plane_a = i_notch;
        p.second_moment_plane_b = i_orth;
        p.extreme_fiber_distance_a = c_notch;
        p.extreme_fiber_distance_b = R;
    } else {
        p.second_moment_plane_a = i_orth;
        p.second_moment_plane_b = i_notch;
        p.extreme_fiber_distance_a = R;
        p.extreme_fiber_distance_b = c_notch;
    }
    return p;
}

InterferenceReport interference(const ValidatedScrewSpec& spec, double tunnel_diameter) {
    InterferenceReport r;
    r.core_clearance = (tunnel_diameter - spec.spec().core_diameter) / 2.0;
    r.thread_bite = (spec.spec().outer_diameter - tunnel_diameter) / 2.0;
    r.can_enter = r.core_clearance >= 0.0;
    r.threads_engage = r.thread_bite > 0.0;
    r.feasible = r.can_enter && r.threads_engage;
    return r;
}

}  // namespace bmscrew::model
