#include "bmscrew/fixate.hpp"

#include <algorithm>
#include <cmath>

namespace bmscrew::fixate {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double thread_shear_factor(const model::ValidatedScrewSpec& spec) {
    return 0.5 + 0.57735 * spec.thread_depth() / spec.spec().thread_pitch;
}

double pullout_strength(const model::ValidatedScrewSpec& spec, const insertion::BoneSpec& bone,
                        double engaged_length) {
    if (engaged_length < 0.0 || engaged_length > spec.threaded_length() + 1e-9)
        throw OutOfRange("engaged_length outside [0, threaded length]");
    return bone.material.shear_strength * engaged_length * kPi * spec.spec().outer_diameter *
           thread_shear_factor(spec);
}

std::string to_string(GoverningMode m) {
    switch (m) {
        case GoverningMode::Pullout: return "pullout";
        case GoverningMode::BoneBearing: return "bone-bearing";
        case GoverningMode::ScrewBending: return "screw-bending";
        case GoverningMode::Baseline: return "baseline";
    }
    return "baseline";
}

FixationReport fixation_capacity(const FractureScenario& sc) {
    if (!(sc.load_offset > 0.0)) throw InvalidGeometry("load_offset", "must be positive");
    if (sc.cut_width < 0.0) throw InvalidGeometry("cut_width", "must be non-negative");
    sc.bone.validate();

    FixationReport r;
    r.baseline = sc.baseline_capacity;
    if (!sc.screw) {
        r.capacity = r.baseline;
        r.governing_mode = GoverningMode::Baseline;
        return r;
    }

    const model::ValidatedScrewSpec& screw = *sc.screw;
    const model::ScrewSpec& sp = screw.spec();
    const double seat = std::min(screw.threaded_length(), sc.tunnel.centerline.total_arc_length());
    const double cut_center = sc.tunnel.centerline.total_arc_length() / 2.0;
    const double far_begin = cut_center + sc.cut_width / 2.0;
    if (far_begin >= seat - 1e-9)
        throw NoEngagementAcrossFracture("no engaged threads beyond the fracture plane");

    r.far_side_engaged = seat - far_begin;
    // Lever arm: arc distance from the fracture plane to the centroid of the
    // far-side engaged thread span, measured along the curved tunnel.
    r.lever_arm = 0.5 * (far_begin + seat) - cut_center;

    const double scale = r.lever_arm / sc.load_offset;
    r.pullout_limited = pullout_strength(screw, sc.bone, r.far_side_engaged) * scale;

    // Bone bearing: projected thread-bite annulus of the far-side engaged
    // threads, sheared/crushed at the bone shear strength.
    int far_threads = static_cast<int>(std::floor(r.far_side_engaged / sp.thread_pitch + 1e-9));
    double bite_annulus =
        kPi * (sp.outer_diameter * sp.outer_diameter - sp.core_diameter * sp.core_diameter) / 4.0;
    r.bearing_limited = sc.bone.material.shear_strength * far_threads * bite_annulus * scale;

    // Screw bending: plastic check of the notched section. Two-web plastic
    // modulus Z = 2 * (w * t^2 / 4) about the web centroid; a solid screw
    // uses the annulus plastic modulus.
    double z_p;
    if (sp.notches) {
        const double R = screw.core_radius();
        const double rr = screw.cannula_radius();
        const double h = std::max(0.0, R - sp.notches->depth);
        if (h < rr) {
            double w = std::sqrt(R * R - h * h) - std::sqrt(rr * rr - h * h);
            double t = h + rr;
            z_p = 2.0 * (w * t * t / 4.0);
        } else {
            double dc = sp.core_diameter, di = sp.cannula_diameter;
            z_p = (dc * dc * dc - di * di * di) / 6.0;
        }
    } else {
        double dc = sp.core_diameter, di = sp.cannula_diameter;
        z_p = (dc * dc * dc - di * di * di) / 6.0;
    }
    double plastic_moment = sp.material.yield_strength * z_p;  // N*mm
    r.bending_limited = plastic_moment / sc.load_offset;

    double screw_contribution = std::min({r.pullout_limited, r.bearing_limited, r.bending_limited});
    if (screw_contribution == r.pullout_limited)
        r.governing_mode = GoverningMode::Pullout;
    else if (screw_contribution == r.bearing_limited)
        r.governing_mode = GoverningMode::BoneBearing;
    else
        r.governing_mode = GoverningMode::ScrewBending;

    r.capacity = r.baseline + screw_contribution;
    r.fixed_over_unfixed = r.baseline > 0.0 ? r.capacity / r.baseline : 1.0;
    return r;
}

}  // namespace bmscrew::fixate
